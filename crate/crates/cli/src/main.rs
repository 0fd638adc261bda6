//! `diskcover` — build, check, measure, and draw disk coverings of rectangles.
//!
//! Exit codes: 0 success, 1 negative verdict or runtime failure, 2 usage or
//! format error, 3 undecided verdict.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use diskcover::verifier::CoverageStatus;
use diskcover::{bounds, constructions, search, verifier, voronoi};
use diskcover_cli::doc::{CoveringDocument, DocError, ReportDocument};
use diskcover_cli::svg::render_svg;

#[derive(Parser)]
#[command(name = "diskcover", version, about = "Coverings of rectangles by congruent unit disks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a stock covering and write it as a JSON document.
    Construct {
        /// Construction family.
        #[arg(long = "type", value_enum)]
        kind: KindArg,
        /// Disk count (square-chain, aniso).
        #[arg(long)]
        n: Option<usize>,
        /// Lattice size k (hex: k columns of k disks).
        #[arg(long)]
        k: Option<usize>,
        /// Column-stretch parameter of the anisotropic lattice.
        #[arg(long)]
        c1: Option<f64>,
        /// Output path for the covering document.
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether the document's disks cover its rectangle.
    Verify {
        /// Covering document to check.
        input: PathBuf,
        /// Subdivision tolerance: cells smaller than this are declared undecided.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        /// Optional verdict report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Voronoi cells of the disk centers and the induced net statistics.
    Voronoi {
        /// Covering document to analyze.
        input: PathBuf,
        /// Optional SVG rendering with the cell overlay.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Optional net-statistics report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the derived covering constants.
    Constants {
        /// Optional constants report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize the normalized boundary-cell deficit over a grid.
    Minimize {
        /// Grid step in (0, 0.05].
        #[arg(long)]
        grid: f64,
        /// Optional minimization report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print area bounds for a covering by n disks.
    Bounds {
        /// Disk count.
        #[arg(long)]
        n: usize,
        /// Aspect ratio (width/height) to penalize the refinement for.
        #[arg(long)]
        psi: Option<f64>,
    },
    /// Anneal disk positions toward a larger coverable rectangle.
    Search {
        /// Disk count.
        #[arg(long)]
        n: usize,
        /// Verifier-call budget.
        #[arg(long)]
        budget: u64,
        /// RNG seed; the run is a pure function of it.
        #[arg(long)]
        seed: u64,
        /// Optional search report path (includes the best covering).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a covering document to SVG.
    Render {
        /// Covering document to draw.
        input: PathBuf,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
        /// Overlay the Voronoi cells.
        #[arg(long)]
        cells: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    #[value(name = "square-chain")]
    SquareChain,
    Hex,
    Aniso,
}

#[derive(Debug)]
enum CliError {
    /// Bad flag combination or out-of-range argument; exits 2.
    Usage(String),
    /// Unreadable or schema-invalid input document; exits 2.
    Format(String),
    /// The requested computation failed; exits 1.
    Run(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Format(m) => write!(f, "format: {m}"),
            CliError::Run(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Format(_) => ExitCode::from(2),
            CliError::Run(_) => ExitCode::from(1),
        }
    }
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError::Format(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, CliError> {
    match cmd {
        Cmd::Construct { kind, n, k, c1, out } => construct(kind, n, k, c1, &out),
        Cmd::Verify { input, eps, out } => verify(&input, eps, out.as_deref()),
        Cmd::Voronoi { input, svg, out } => voronoi_cmd(&input, svg.as_deref(), out.as_deref()),
        Cmd::Constants { out } => constants(out.as_deref()),
        Cmd::Minimize { grid, out } => minimize(grid, out.as_deref()),
        Cmd::Bounds { n, psi } => bounds_cmd(n, psi),
        Cmd::Search { n, budget, seed, out } => search_cmd(n, budget, seed, out.as_deref()),
        Cmd::Render { input, out, cells } => render(&input, &out, cells),
    }
}

fn read_document(path: &Path) -> Result<CoveringDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(CoveringDocument::from_json(&text)?)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display())))
}

fn write_report<T: Serialize>(path: &Path, kind: &str, payload: T) -> Result<(), CliError> {
    write_text(path, &ReportDocument::new(kind, payload).to_json())
}

fn construct(
    kind: KindArg,
    n: Option<usize>,
    k: Option<usize>,
    c1: Option<f64>,
    out: &Path,
) -> Result<ExitCode, CliError> {
    let report = match kind {
        KindArg::SquareChain => {
            let n = n.ok_or_else(|| CliError::Usage("--type square-chain needs --n".into()))?;
            if k.is_some() || c1.is_some() {
                return Err(CliError::Usage("--k/--c1 do not apply to square-chain".into()));
            }
            constructions::square_chain(n)
        }
        KindArg::Hex => {
            let k = k.ok_or_else(|| CliError::Usage("--type hex needs --k".into()))?;
            if n.is_some() || c1.is_some() {
                return Err(CliError::Usage("--n/--c1 do not apply to hex".into()));
            }
            if k == 0 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            constructions::hex_lattice(k)
        }
        KindArg::Aniso => {
            let n = n.ok_or_else(|| CliError::Usage("--type aniso needs --n".into()))?;
            if k.is_some() {
                return Err(CliError::Usage("--k does not apply to aniso".into()));
            }
            constructions::anisotropic(n, c1.unwrap_or(1.0))
        }
    };
    let report = report.map_err(|e| CliError::Run(e.to_string()))?;

    let mut meta = serde_json::Map::new();
    let kind_name = match kind {
        KindArg::SquareChain => "square-chain",
        KindArg::Hex => "hex",
        KindArg::Aniso => "aniso",
    };
    meta.insert("construction".into(), kind_name.into());
    if let Some(n) = n {
        meta.insert("n".into(), n.into());
    }
    if let Some(k) = k {
        meta.insert("k".into(), k.into());
    }
    if let Some(c1) = c1 {
        meta.insert("c1".into(), c1.into());
    }

    let c = &report.covering;
    let doc = CoveringDocument::from_covering(c, Some(meta));
    write_text(out, &doc.to_json())?;
    println!(
        "wrote {}: {} disks, rectangle {:.4} x {:.4}, area {:.4}",
        out.display(),
        c.n(),
        c.rect.width,
        c.rect.height,
        report.area
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(input: &Path, eps: f64, out: Option<&Path>) -> Result<ExitCode, CliError> {
    if !(eps > 0.0) {
        return Err(CliError::Usage("--eps must be positive".into()));
    }
    let c = read_document(input)?.to_covering()?;
    let verdict = verifier::verify(&c, eps).map_err(|e| CliError::Run(e.to_string()))?;
    if let Some(path) = out {
        write_report(path, "verdict", &verdict)?;
    }
    println!("cells checked: {}", verdict.cells_checked);
    println!("resolution: {:.2e}", verdict.resolution);
    match verdict.status {
        CoverageStatus::Covered => println!("status: covered"),
        CoverageStatus::Uncovered => {
            let w = verdict.witness.expect("uncovered verdict carries a witness");
            println!("status: uncovered");
            println!("witness: ({:.12}, {:.12})", w.x, w.y);
        }
        CoverageStatus::Undecided => println!("status: undecided"),
    }
    Ok(ExitCode::from(verdict_exit_code(verdict.status)))
}

fn verdict_exit_code(status: CoverageStatus) -> u8 {
    match status {
        CoverageStatus::Covered => 0,
        CoverageStatus::Uncovered => 1,
        CoverageStatus::Undecided => 3,
    }
}

fn voronoi_cmd(input: &Path, svg: Option<&Path>, out: Option<&Path>) -> Result<ExitCode, CliError> {
    let c = read_document(input)?.to_covering()?;
    let diagram = voronoi::voronoi_cells(&c).map_err(|e| CliError::Run(e.to_string()))?;
    let stats = voronoi::net_stats(&diagram).map_err(|e| CliError::Run(e.to_string()))?;
    println!("cells: {}", stats.n);
    println!("net: v={} e={} (v - e + n = {})", stats.v, stats.e, stats.v as i64 - stats.e as i64 + stats.n as i64);
    println!("average sides: {:.4}", stats.avg_sides);
    println!("boundary cells: {}", stats.boundary_cells);
    println!("boundary edges: {}", stats.boundary_edge_count);
    if let Some(path) = svg {
        write_text(path, &render_svg(&c, Some(&diagram)))?;
    }
    if let Some(path) = out {
        write_report(path, "netstats", &stats)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn constants(out: Option<&Path>) -> Result<ExitCode, CliError> {
    let rep = bounds::constants();
    for (name, value) in [
        ("k5", rep.k5),
        ("k6", rep.k6),
        ("lambda", rep.lambda),
        ("u0", rep.u0),
        ("per_cell_min", rep.per_cell_min),
        ("alpha_lower", rep.alpha_lower),
        ("alpha_upper", rep.alpha_upper),
        ("beta_lower", rep.beta_lower),
        ("beta_upper", rep.beta_upper),
        ("beta_upper_coarse", rep.beta_upper_coarse),
        ("naive_lower", rep.naive_lower),
        ("sharper_lower", rep.sharper_lower),
    ] {
        println!("{} {:.7}", name, value);
    }
    if let Some(path) = out {
        write_report(path, "constants", &rep)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn minimize(grid: f64, out: Option<&Path>) -> Result<ExitCode, CliError> {
    if !(grid > 0.0 && grid <= 0.05) {
        return Err(CliError::Usage("--grid must lie in (0, 0.05]".into()));
    }
    let r = bounds::envelope_minimization(grid).map_err(|e| CliError::Run(e.to_string()))?;
    println!("grid step: {}", r.grid_resolution);
    println!("diagonal argmin: {:.6}", r.diag_argmin);
    println!("diagonal minimum: {:.9}", r.diag_min_value);
    println!("grid argmin: ({:.6}, {:.6})", r.full_grid_argmin.0, r.full_grid_argmin.1);
    println!("grid minimum: {:.9}", r.full_grid_min_value);
    println!("symmetry deviation: {:.3e}", r.symmetry_sup_deviation);
    println!("argmin in balanced region: {}", r.envelope_min_in_symmetric_region);
    if let Some(path) = out {
        write_report(path, "minimization", &r)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds_cmd(n: usize, psi: Option<f64>) -> Result<ExitCode, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let upper = bounds::area_upper_bound(n).map_err(|e| CliError::Run(e.to_string()))?;
    let gap = bounds::area_upper_gap(n).map_err(|e| CliError::Run(e.to_string()))?;
    println!("n {}", n);
    println!("lower {:.7}", 2.0 * n as f64);
    println!("upper {:.7}", upper);
    println!("coarse_upper {:.7}", upper + gap);
    println!("gap {:.7}", gap);
    if let Some(psi) = psi {
        if !(psi > 0.0) {
            return Err(CliError::Usage("--psi must be positive".into()));
        }
        let penalty = bounds::aspect_penalty(psi).map_err(|e| CliError::Run(e.to_string()))?;
        println!("aspect_penalty {:.7}", penalty);
        println!("upper_at_aspect {:.7}", upper + gap - gap * penalty);
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct HistoryRecord {
    iteration: u64,
    area: f64,
}

#[derive(Serialize)]
struct SearchSummary<'a> {
    best_area: f64,
    ge_2n: bool,
    lt_upper_bound: bool,
    rng_algorithm: &'a str,
}

#[derive(Serialize)]
struct SearchPayload {
    best: CoveringDocument,
    area: f64,
    history: Vec<(u64, f64)>,
    bound_flags: search::BoundFlags,
    rng_algorithm: String,
}

fn search_cmd(n: usize, budget: u64, seed: u64, out: Option<&Path>) -> Result<ExitCode, CliError> {
    if n == 0 || budget == 0 {
        return Err(CliError::Usage("--n and --budget must be at least 1".into()));
    }
    let cfg = search::SearchConfig::for_n(n, budget, seed);
    let r = search::maximize_area(&cfg).map_err(|e| CliError::Run(e.to_string()))?;
    for &(iteration, area) in &r.history {
        let line = serde_json::to_string(&HistoryRecord { iteration, area })
            .map_err(|e| CliError::Run(e.to_string()))?;
        println!("{line}");
    }
    let summary = SearchSummary {
        best_area: r.area,
        ge_2n: r.bound_flags.ge_2n,
        lt_upper_bound: r.bound_flags.lt_upper_bound,
        rng_algorithm: &r.rng_algorithm,
    };
    let line = serde_json::to_string(&summary).map_err(|e| CliError::Run(e.to_string()))?;
    println!("{line}");
    if let Some(path) = out {
        let mut meta = serde_json::Map::new();
        meta.insert("n".into(), n.into());
        meta.insert("budget".into(), budget.into());
        meta.insert("seed".into(), seed.into());
        let payload = SearchPayload {
            best: CoveringDocument::from_covering(&r.best, Some(meta)),
            area: r.area,
            history: r.history,
            bound_flags: r.bound_flags,
            rng_algorithm: r.rng_algorithm,
        };
        write_report(path, "search", &payload)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn render(input: &Path, out: &Path, cells: bool) -> Result<ExitCode, CliError> {
    let c = read_document(input)?.to_covering()?;
    let svg = if cells {
        let diagram = voronoi::voronoi_cells(&c).map_err(|e| CliError::Run(e.to_string()))?;
        render_svg(&c, Some(&diagram))
    } else {
        render_svg(&c, None)
    };
    write_text(out, &svg)?;
    println!("wrote {}", out.display());
    Ok(ExitCode::SUCCESS)
}
