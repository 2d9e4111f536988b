//! `hexastix`: exact construction, distance certification, coverage and
//! export for generalized hexastix arrangements. Writes one JSON document to
//! standard output; diagnostics go to standard error.
//!
//! Exit codes: 0 success, 2 invalid input, 3 internal or convergence failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hexastix::alt::{self, AltConfig};
use hexastix::coverage::{self, CellOptions};
use hexastix::field::{log_matrix, FieldTable, OffsetFamily};
use hexastix::io::{obj_mesh, PolytopeDoc, RunManifest, APPROX_DIGITS};
use hexastix::lattice::{max_sq_dist, parallel_sq_dist};
use hexastix::lines::{all_pairs, check_optimal, parallel_is_closer};
use hexastix::rational::{parse_rat, sqrt_decimal, to_decimal};
use hexastix::{Error, Rat};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "hexastix", version, about = "Generalized hexastix arrangements over the permutohedral lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Also write the JSON document to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the field, the log matrix and the offsets for prime-power n.
    Construct(NArg),
    /// Exact minimum squared distance for every pair of line families.
    Distances(NArg),
    /// Exact fraction of n-space covered by the generalized prisms.
    Coverage(CellArgs),
    /// Hypercube-diagonal arrangement: closed form, fixture check or search.
    Alt(AltArgs),
    /// Export a cell as JSON (and optionally an OBJ mesh).
    Export(ExportArgs),
}

#[derive(Args, Debug)]
struct NArg {
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug)]
struct CellArgs {
    #[arg(long)]
    n: usize,
    /// Coordinate (1-based) deleted by the chart; defaults to the last one.
    #[arg(long)]
    chart: Option<usize>,
    /// Largest enumeration radius^2 tried, as a rational "p/q".
    #[arg(long)]
    radius_cap: Option<String>,
}

#[derive(Args, Debug)]
struct AltArgs {
    #[arg(long)]
    n: usize,
    /// Use the closed-form n = 4 offsets.
    #[arg(long, conflicts_with_all = ["verify", "seed", "budget"])]
    formula: bool,
    /// Score the configuration stored in this JSON file.
    #[arg(long, conflicts_with_all = ["seed", "budget"])]
    verify: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Total hill-climbing moves.
    #[arg(long, default_value_t = 200_000)]
    budget: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportObject {
    /// The prism cross-section V for the construction at n.
    CellV,
    /// The Voronoi cell of A*_n.
    StdCell,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(value_enum)]
    object: ExportObject,
    #[command(flatten)]
    cell: CellArgs,
    /// Write a Wavefront OBJ mesh (3-dimensional cells only).
    #[arg(long)]
    obj_out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_domain_error() { 2 } else { 3 }, message: e.to_string() }
    }
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: 2, message: format!("{}: {e}", path.display()) }
    }
}

fn approx(values: &[(&str, String)]) -> BTreeMap<String, String> {
    values.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn cell_options(args: &CellArgs, ambient: usize) -> Result<CellOptions, Failure> {
    let mut opts = CellOptions::default();
    if let Some(c) = args.chart {
        if c == 0 || c > ambient {
            return Err(Failure::domain(format!("--chart must be in 1..={ambient}")));
        }
        opts.chart_drop = Some(c - 1);
    }
    if let Some(r) = &args.radius_cap {
        opts.radius_cap = parse_rat(r)?;
    }
    Ok(opts)
}

fn construct(n: usize) -> Result<RunManifest, Failure> {
    let field = FieldTable::new(n as u64)?;
    let m = log_matrix(&field);
    let fam = OffsetFamily::construct(n)?;
    let optimal = (n >= 3).then(|| check_optimal(&fam));
    let results = json!({
        "n": n,
        "field": {
            "p": field.p,
            "k": field.k,
            "q": field.q,
            "modulus": field.modulus,
            "alpha": field.element_name(field.alpha),
            "elements": field.elems.iter().map(|&a| field.element_name(a)).collect::<Vec<_>>(),
        },
        "log_matrix": m.entries,
        "offsets": fam.u,
        "directions": fam.v,
        "optimal": optimal,
        "pair_sq_dist_bound": (n >= 2).then(|| max_sq_dist(n - 2).to_string()),
    });
    Ok(RunManifest::new("construct", json!({ "n": n }), results))
}

fn distances(n: usize) -> Result<RunManifest, Failure> {
    let fam = OffsetFamily::construct(n)?;
    let pairs = all_pairs(&fam)?;
    let bound = max_sq_dist(n - 2);
    let parallel = parallel_sq_dist(n)?;
    let rows: Vec<Value> = pairs
        .iter()
        .map(|p| {
            json!({
                "i": p.i + 1,
                "j": p.j + 1,
                "sq_dist": p.sq_dist.to_string(),
                "w": p.w,
                "nearest_lattice_point": p.nearest,
            })
        })
        .collect();
    let optimal = pairs.iter().all(|p| *p.sq_dist.value() == bound);
    let mut manifest = RunManifest::new(
        "distances",
        json!({ "n": n }),
        json!({
            "n": n,
            "bound_sq_dist": bound.to_string(),
            "parallel_sq_dist": parallel.to_string(),
            "optimal": optimal,
            "pairs": rows,
        }),
    );
    manifest.approximations.values = approx(&[
        ("bound_distance", sqrt_decimal(&bound, APPROX_DIGITS)),
        ("parallel_distance", sqrt_decimal(&parallel, APPROX_DIGITS)),
    ]);
    if parallel_is_closer(n)? {
        manifest.warnings.push(format!(
            "parallel lines of one family are closer (squared distance {parallel}) than the inter-family bound {bound}"
        ));
    }
    Ok(manifest)
}

fn coverage(args: &CellArgs) -> Result<RunManifest, Failure> {
    let n = args.n;
    let opts = cell_options(args, n)?;
    let report = coverage::coverage_fraction_with(n, &opts)?;
    let ortho_sq = report.orthonormal_vol_v_sq();
    let mut manifest = RunManifest::new(
        "coverage",
        json!({ "n": n, "chart": report.cell_v.chart.drop + 1, "radius_cap": opts.radius_cap.to_string() }),
        json!({
            "n": n,
            "fraction": report.fraction.to_string(),
            "vol_v_param": report.vol_v.to_string(),
            "vol_std_param": report.vol_std.to_string(),
            "orthonormal_vol_v_sq": ortho_sq.to_string(),
            "radius_sq": report.cell_v.radius_sq.to_string(),
            "candidates": report.cell_v.candidates,
            "facets": report.cell_v.polytope.h.constraints.len(),
            "vertices": report.cell_v.polytope.v.vertices.len(),
            "cell": PolytopeDoc::from_cell(&report.cell_v),
        }),
    );
    manifest.approximations.values = approx(&[
        ("fraction", to_decimal(&report.fraction, APPROX_DIGITS)),
        ("orthonormal_vol_v", sqrt_decimal(&ortho_sq, APPROX_DIGITS)),
    ]);
    Ok(manifest)
}

/// Reads a bare configuration or a manifest whose results carry one.
fn read_config(path: &Path) -> Result<AltConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
    let cfg = doc.pointer("/results/config").cloned().unwrap_or(doc);
    let cfg: AltConfig = serde_json::from_value(cfg).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
    cfg.validate()?;
    Ok(cfg)
}

fn alt_cmd(args: &AltArgs) -> Result<RunManifest, Failure> {
    let n = args.n;
    let (mode, cfg, score, seed) = if args.formula {
        if n != 4 {
            return Err(Failure::domain("--formula is only defined for n = 4"));
        }
        let cfg = alt::alt_formula_config();
        let s = alt::alt_min_sq_dist(&cfg)?;
        ("formula", cfg, s, None)
    } else if let Some(path) = &args.verify {
        let cfg = read_config(path)?;
        if cfg.n != n {
            return Err(Failure::domain(format!("fixture is for n = {}, not {n}", cfg.n)));
        }
        let s = alt::alt_min_sq_dist(&cfg)?;
        ("verify", cfg, s, None)
    } else {
        let (cfg, s) = alt::alt_search(n, args.seed, args.budget)?;
        ("search", cfg, s, Some(args.seed))
    };
    let reference: Option<Rat> = alt::reference_sq_dist(n);
    let mut manifest = RunManifest::new(
        "alt",
        json!({ "n": n, "mode": mode, "seed": seed, "budget": (mode == "search").then_some(args.budget) }),
        json!({
            "n": n,
            "mode": mode,
            "min_sq_dist": score.to_string(),
            "reference_sq_dist": reference.as_ref().map(Rat::to_string),
            "meets_reference": reference.as_ref().map(|r| score >= *r),
            "config": cfg,
        }),
    );
    manifest.seed = seed;
    manifest.approximations.values = approx(&[("min_distance", sqrt_decimal(&score, APPROX_DIGITS))]);
    Ok(manifest)
}

fn export(args: &ExportArgs) -> Result<RunManifest, Failure> {
    let n = args.cell.n;
    let (cell, name) = match args.object {
        ExportObject::CellV => {
            let opts = cell_options(&args.cell, n)?;
            let fam = OffsetFamily::construct(n)?;
            (coverage::cell_v_with(&fam, &opts)?, "cell-v")
        }
        ExportObject::StdCell => {
            let opts = cell_options(&args.cell, n + 1)?;
            (coverage::std_cell_with(n, &opts)?, "std-cell")
        }
    };
    if let Some(path) = &args.obj_out {
        let mesh = obj_mesh(&cell)?;
        fs::write(path, mesh).map_err(|e| Failure::io(path, e))?;
    }
    let doc = PolytopeDoc::from_cell(&cell);
    Ok(RunManifest::new(
        "export",
        json!({ "object": name, "n": n, "chart": cell.chart.drop + 1 }),
        json!({
            "object": name,
            "n": n,
            "facets": doc.facets.len(),
            "vertices": doc.vertices.len(),
            "polytope": doc,
        }),
    ))
}

fn run(cli: &Cli) -> Result<RunManifest, Failure> {
    match &cli.command {
        Command::Construct(a) => construct(a.n),
        Command::Distances(a) => distances(a.n),
        Command::Coverage(a) => coverage(a),
        Command::Alt(a) => alt_cmd(a),
        Command::Export(a) => export(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(manifest) => {
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            if let Some(path) = &cli.json_out {
                if let Err(e) = fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
