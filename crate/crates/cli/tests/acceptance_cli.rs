//! Acceptance gate, criterion 10: the full construct → verify → voronoi →
//! render pipeline on the k=3 hexagonal lattice, plus lossless JSON
//! round-trips and byte-deterministic SVG output, all inside a 5 s budget.

use std::process::Command;
use std::time::{Duration, Instant};

use diskcover_cli::doc::CoveringDocument;

#[test]
fn criterion_10_cli_pipeline() {
    let t = Instant::now();
    let mut failures: Vec<String> = Vec::new();
    let dir = tempfile::tempdir().expect("tempdir");
    let root = dir.path();

    let stages: [(&str, Vec<&str>); 5] = [
        ("construct", vec!["construct", "--type", "hex", "--k", "3", "--out", "h3.json"]),
        ("verify", vec!["verify", "h3.json", "--eps", "1e-3"]),
        ("voronoi", vec!["voronoi", "h3.json", "--svg", "first.svg", "--out", "net.json"]),
        ("voronoi again", vec!["voronoi", "h3.json", "--svg", "second.svg"]),
        ("render", vec!["render", "h3.json", "--out", "figure.svg", "--cells"]),
    ];
    for (stage, args) in &stages {
        let out = Command::new(env!("CARGO_BIN_EXE_diskcover"))
            .current_dir(root)
            .args(args)
            .output()
            .expect("binary runs");
        if out.status.code() != Some(0) {
            failures.push(format!(
                "{stage} exited with {:?}: {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr).trim()
            ));
        }
    }

    if failures.is_empty() {
        // Lossless round-trip: document -> covering -> document preserves
        // every coordinate bit.
        let text = std::fs::read_to_string(root.join("h3.json")).expect("document written");
        let doc = CoveringDocument::from_json(&text).expect("document parses");
        let covering = doc.to_covering().expect("document converts");
        let again = CoveringDocument::from_covering(&covering, doc.metadata.clone());
        let reparsed = CoveringDocument::from_json(&again.to_json()).expect("reserialized parses");
        if doc.rect.w.to_bits() != reparsed.rect.w.to_bits()
            || doc.rect.h.to_bits() != reparsed.rect.h.to_bits()
        {
            failures.push("rectangle sides changed across the round-trip".into());
        }
        if doc.disks.len() != reparsed.disks.len() {
            failures.push("disk count changed across the round-trip".into());
        } else {
            for (i, (a, b)) in doc.disks.iter().zip(&reparsed.disks).enumerate() {
                if a.x.to_bits() != b.x.to_bits() || a.y.to_bits() != b.y.to_bits() {
                    failures.push(format!("disk {i} moved across the round-trip"));
                }
            }
        }

        let first = std::fs::read(root.join("first.svg")).expect("first svg");
        let second = std::fs::read(root.join("second.svg")).expect("second svg");
        if first != second {
            failures.push("voronoi SVG differs between two identical runs".into());
        }
        let figure = std::fs::read_to_string(root.join("figure.svg")).expect("figure svg");
        if !figure.contains("<polygon") {
            failures.push("rendered figure is missing the cell overlay".into());
        }
    }

    let elapsed = t.elapsed();
    if elapsed > Duration::from_secs(5) {
        failures.push(format!("runtime {elapsed:.2?} exceeded the 5 s budget"));
    }
    if failures.is_empty() {
        println!("criterion 10: PASS ({elapsed:.2?})");
    } else {
        println!("criterion 10: FAIL — {}", failures[0]);
        panic!("criterion 10 failed:\n{}", failures.join("\n"));
    }
}
