//! Deterministic SVG rendering of coverings.
//!
//! Fixed scale of 100 px per disk radius, y axis flipped so figures read
//! with the origin at the rectangle's lower-left corner. Elements appear in
//! a stable order — rectangle outline, then disks by index, then optional
//! Voronoi cells by site index — and every coordinate is printed with two
//! decimals, so identical inputs yield identical bytes.

use std::fmt::Write;

use diskcover::voronoi::VoronoiDiagram;
use diskcover::Covering;

/// Pixels per unit length (the disk radius).
const SCALE: f64 = 100.0;
/// World-units margin around the rectangle.
const MARGIN: f64 = 1.2;

/// Render `c` (and optionally its Voronoi cells) as a standalone SVG.
pub fn render_svg(c: &Covering, cells: Option<&VoronoiDiagram>) -> String {
    let h = c.rect.height;
    let px = |x: f64| (x + MARGIN) * SCALE;
    let py = |y: f64| (h + MARGIN - y) * SCALE;
    let width = (c.rect.width + 2.0 * MARGIN) * SCALE;
    let height = (h + 2.0 * MARGIN) * SCALE;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        s,
        r##"  <rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000000" stroke-width="2"/>"##,
        px(0.0),
        py(h),
        c.rect.width * SCALE,
        h * SCALE
    );
    for d in &c.disks {
        let (cx, cy) = (px(d.center.x), py(d.center.y));
        let _ = writeln!(
            s,
            r##"  <circle cx="{cx:.2}" cy="{cy:.2}" r="{SCALE:.0}" fill="none" stroke="#2c7fb8" stroke-width="1.5"/>"##
        );
        let _ = writeln!(
            s,
            r##"  <circle cx="{cx:.2}" cy="{cy:.2}" r="2" fill="#2c7fb8"/>"##
        );
    }
    if let Some(diagram) = cells {
        for cell in &diagram.cells {
            let mut points = String::new();
            for v in cell.polygon.vertices() {
                if !points.is_empty() {
                    points.push(' ');
                }
                let _ = write!(points, "{:.2},{:.2}", px(v.x), py(v.y));
            }
            let _ = writeln!(
                s,
                r##"  <polygon points="{points}" fill="none" stroke="#d95f02" stroke-width="1"/>"##
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
