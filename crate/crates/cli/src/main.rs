mod config;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tree_cover::cube3d::{self, build_cube_cover, load_head_table, verify_cube_cover, HeadTable};
use tree_cover::grid::{render_svg, Construction, TreeKind};
use tree_cover::lower_bound::{one_tree_witness, render_witness_svg, CircleInstance};
use tree_cover::model::{self, ExactLength, IndexedCover, Metric, Norm, PlanePoint, TreeCover, WeightedTree};
use tree_cover::pipeline::{run_pipeline, NormalizeParams, DEFAULT_D};
use tree_cover::verify::{
    self, cell_cover_multiplicity, check_edge_discipline, check_partition, cover_stretch, covering_radius,
    cut_decomposition, strong_cover_check, verify_lemma_cathetus, verify_lemma_interior, verify_theorem2, CheckParams,
    Convention, CutSide, NeighborhoodDomain, StrongCoverParams,
};

use config::Config;
use report::Report;

/// Two-tree covers of planar point sets, their verifiers, the one-tree
/// lower-bound demo and the three-tree cube cover.
///
/// Exit status: 0 when every requested check passes, 1 on a verification
/// violation (the report is still written), 2 on usage or input errors.
#[derive(Debug, Parser)]
#[command(name = "tree-cover", version)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for the verifier sweeps [default: available parallelism].
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Absolute tolerance on ratio comparisons [default: 1e-6].
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// key=value file setting tolerance, D and seed; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the red/blue construction for n = 2^m and write it as JSON.
    Construct(ConstructArgs),
    /// Run verifiers.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Build the non-Steiner two-tree cover of a point set.
    Cover(CoverArgs),
    /// Measure the stretch of a cover document.
    Stretch(StretchArgs),
    /// Demonstrations.
    #[command(subcommand)]
    Demo(DemoCommand),
    /// Build and check the three-tree cover of the cube {0..n}^3.
    Cube3d(CubeArgs),
    /// Depth cuts of the grid trees and their cell-cover multiplicity.
    Cutcover(CutArgs),
}

#[derive(Debug, Args)]
struct ConstructArgs {
    /// Grid exponent, 1 to 10.
    #[arg(long)]
    m: u32,
    /// Output JSON path [default: standard output].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional SVG drawing of both trees.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Check the construction for n = 2^m.
    Grid(GridArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridCheck {
    Partition,
    Edges,
    Covering,
    Theorem2,
    Lemma1,
    Lemma2,
    Strong,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Grid exponent, 1 to 10.
    #[arg(long)]
    m: u32,
    /// Checks to run.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "partition,edges,covering,theorem2,lemma1,lemma2")]
    checks: Vec<GridCheck>,
    /// Side of the embedded square for the covering radius [default: n/2 - 1].
    #[arg(long)]
    side: Option<i64>,
    /// Sample this many leaf pairs instead of the automatic choice.
    #[arg(long)]
    sample: Option<u64>,
    /// Points per cathetus edge for lemma2.
    #[arg(long, default_value_t = 2)]
    subdivisions: u32,
    /// Stretch constant for the strong check.
    #[arg(long, default_value_t = 7.0)]
    c: f64,
    /// Neighbourhood convention for the strong check.
    #[arg(long, value_enum, default_value = "restricted")]
    convention: ConventionArg,
    /// Norm for the strong check.
    #[arg(long, value_enum, default_value = "euclidean")]
    norm: NormArg,
    /// Report path [default: standard output].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    Strict,
    Restricted,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    Euclidean,
    Linf,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Euclidean => Norm::Euclidean,
            NormArg::Linf => Norm::Linf,
        }
    }
}

#[derive(Debug, Args)]
struct CoverArgs {
    /// JSON array of [x, y] points.
    #[arg(long)]
    points: PathBuf,
    /// Minimum pairwise distance after scaling [default: 1024].
    #[arg(long = "D")]
    d: Option<f64>,
    /// Stretch the measured cover must not exceed.
    #[arg(long, default_value_t = 40.0)]
    bound: f64,
    /// Cover JSON path [default: standard output].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional stretch report path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StretchArgs {
    /// Cover JSON with "trees" and "points".
    #[arg(long)]
    cover: PathBuf,
    /// Multiplicative bound to check against.
    #[arg(long)]
    bound: Option<f64>,
    /// Additive slack subtracted from cover distances.
    #[arg(long, default_value_t = 0.0)]
    slack: f64,
    /// Sample this many pairs instead of the automatic choice.
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long, value_enum, default_value = "euclidean")]
    norm: NormArg,
    /// Report path [default: standard output].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum DemoCommand {
    /// Stretch witness for a single spanning tree on points of a circle.
    OneTree(OneTreeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TreeShape {
    Star,
    Path,
    Random,
}

#[derive(Debug, Args)]
struct OneTreeArgs {
    /// Number of circle points, at least 12.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, value_enum, default_value = "random")]
    tree: TreeShape,
    /// Optional SVG drawing.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Report path [default: standard output].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CubeArgs {
    /// Side of the cube, a positive multiple of 8.
    #[arg(long, default_value_t = 24)]
    n: i64,
    /// Run the shared-head and low-distance checks.
    #[arg(long)]
    verify: bool,
    /// Head table file [default: the embedded table].
    #[arg(long)]
    table: Option<PathBuf>,
    /// Low-distance constant.
    #[arg(long, default_value_t = cube3d::DEFAULT_C)]
    c: f64,
    /// Report path [default: standard output].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CutArgs {
    /// Grid exponent for the trees R′ and B′ (unit L∞ edge weights).
    #[arg(long, default_value_t = 5)]
    m: u32,
    /// Cut parameter B.
    #[arg(long, default_value_t = 3)]
    b: i64,
    /// Cut this tree JSON (positive integer weights) instead of the grid trees.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Report path [default: standard output].
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Settings {
    seed: u64,
    tolerance: f64,
    d: f64,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn construct(args: &ConstructArgs) -> Result<bool> {
    let c = Construction::build(args.m)?;
    emit_text(args.out.as_deref(), &(model::serialize(&c.to_document())? + "\n"))?;
    if let Some(svg) = &args.svg {
        write(svg, &render_svg(&c))?;
    }
    log::info!("built m={} with {} points", args.m, c.points().len());
    Ok(true)
}

fn verify_grid(args: &GridArgs, s: &Settings) -> Result<bool> {
    let c = Construction::build(args.m)?;
    let side = args.side.unwrap_or(c.n() / 2 - 1);
    let mut params = CheckParams {
        tolerance: s.tolerance,
        seed: s.seed,
        ..CheckParams::default()
    };
    if let Some(k) = args.sample {
        params = params.sampled(k, s.seed);
    }
    let mut report = Report::new("verify grid", s.seed);
    report.results.insert("m".into(), json!(args.m));
    for check in &args.checks {
        match check {
            GridCheck::Partition => {
                let r = check_partition(&c);
                report.add("partition", r.is_ok(), json!({ "error": r.err() }))?;
            }
            GridCheck::Edges => {
                let r = check_edge_discipline(&c);
                report.add("edges", r.is_ok(), json!({ "error": r.err() }))?;
            }
            GridCheck::Covering => {
                let r = covering_radius(&c, side)?;
                let pass = r.max_dist2 <= verify::grid_checks::THEOREM2_RADIUS2;
                report.add(
                    "covering",
                    pass,
                    json!({ "side": side, "radius": r.radius(), "max_dist2": r.max_dist2, "point": r.point, "leaf": r.leaf }),
                )?;
            }
            GridCheck::Theorem2 => {
                let r = verify_theorem2(&c, side, &params)?;
                report.add("theorem2", r.pass, &r)?;
            }
            GridCheck::Lemma1 => {
                let r = verify_lemma_interior(&c, true).with_bound(2.0 * std::f64::consts::SQRT_2, s.tolerance);
                report.add("lemma1", r.pass(), &r)?;
            }
            GridCheck::Lemma2 => {
                let r = verify_lemma_cathetus(&c, args.subdivisions, true)?;
                let rep = r.report.clone().with_bound(5.0, s.tolerance);
                report.add("lemma2", rep.pass(), json!({ "report": rep, "x": r.x, "y": r.y }))?;
            }
            GridCheck::Strong => {
                let trees = [c.tree(TreeKind::RedPrime).clone(), c.tree(TreeKind::BluePrime).clone()];
                let pts: Vec<Vec<i64>> = c.points().iter().map(|p| vec![p.x, p.y]).collect();
                let domain = NeighborhoodDomain::new(&trees, &pts)?;
                let convention = match args.convention {
                    ConventionArg::Strict => Convention::Strict,
                    ConventionArg::Restricted => Convention::Restricted,
                };
                let p = StrongCoverParams {
                    tolerance: s.tolerance,
                    ..StrongCoverParams::new(args.c, convention, args.norm.into())
                };
                let out = strong_cover_check(&domain, &p);
                report.add("strong", out.pass(), json!({ "c": args.c, "outcome": out }))?;
            }
        }
    }
    report.emit(args.out.as_deref())?;
    Ok(report.pass)
}

fn cover(args: &CoverArgs, s: &Settings) -> Result<bool> {
    let pts: Vec<PlanePoint> = model::deserialize(&read(&args.points)?)?;
    let d = args.d.unwrap_or(s.d);
    let check = CheckParams {
        tolerance: s.tolerance,
        seed: s.seed,
        ..CheckParams::default()
    }
    .with_bound(args.bound);
    let run = run_pipeline(&pts, &NormalizeParams { d }, &check)?;
    emit_text(args.out.as_deref(), &(model::serialize(&run.document())? + "\n"))?;
    let pass = run.report.pass();
    if let Some(path) = &args.report {
        let mut report = Report::new("cover", s.seed);
        report.results.insert("m".into(), json!(run.final_cover.m));
        report.add("stretch", pass, &run.report)?;
        report.emit(Some(path))?;
    }
    if !pass {
        log::warn!("measured stretch {} exceeds {}", run.report.max_ratio, args.bound);
    }
    Ok(pass)
}

fn stretch(args: &StretchArgs, s: &Settings) -> Result<bool> {
    let cover: TreeCover = model::deserialize(&read(&args.cover)?)?;
    let ids: Vec<usize> = cover.points.keys().copied().collect();
    let indexed = IndexedCover::new(cover);
    let mut params = CheckParams {
        tolerance: s.tolerance,
        seed: s.seed,
        additive_slack: args.slack,
        norm: args.norm.into(),
        ..CheckParams::default()
    };
    if let Some(b) = args.bound {
        params = params.with_bound(b);
    }
    if let Some(k) = args.sample {
        params = params.sampled(k, s.seed);
    }
    let r = cover_stretch(&indexed, &ids, &params)?;
    let mut report = Report::new("stretch", s.seed);
    report.add("stretch", r.pass(), &r)?;
    report.emit(args.out.as_deref())?;
    Ok(report.pass)
}

fn one_tree(args: &OneTreeArgs, s: &Settings) -> Result<bool> {
    let inst = match args.tree {
        TreeShape::Star => CircleInstance::star(args.n, 0)?,
        TreeShape::Path => CircleInstance::circle_path(args.n)?,
        TreeShape::Random => CircleInstance::random(args.n, s.seed)?,
    };
    let w = one_tree_witness(&inst)?;
    if let Some(svg) = &args.svg {
        write(svg, &render_witness_svg(&inst, &w))?;
    }
    let pass = w.ratio >= w.bound - s.tolerance;
    eprintln!(
        "witness ({}, {}): ratio {:.4} against n/pi = {:.4}",
        w.r, w.b, w.ratio, w.bound
    );
    let mut report = Report::new("demo one-tree", s.seed);
    report.add("witness", pass, &w)?;
    report.emit(args.out.as_deref())?;
    Ok(pass)
}

fn cube(args: &CubeArgs, s: &Settings) -> Result<bool> {
    let table = match &args.table {
        Some(p) => load_head_table(&read(p)?)?,
        None => HeadTable::embedded(),
    };
    let cover = build_cube_cover(args.n, &table)?;
    let mut report = Report::new("cube3d", s.seed);
    report.results.insert("n".into(), json!(args.n));
    let max_head = cover.max_head_distance();
    report.add(
        "head_radius",
        max_head <= cube3d::HEAD_RADIUS,
        json!({ "max": max_head, "bound": cube3d::HEAD_RADIUS }),
    )?;
    if args.verify {
        let r = verify_cube_cover(&cover, args.c, s.tolerance)?;
        report.add("shared_heads", r.unshared.is_none(), json!({ "unshared": r.unshared }))?;
        report.add(
            "low_distance",
            r.low_distance.pass(),
            json!({ "c": args.c, "outcome": r.low_distance }),
        )?;
    }
    report.emit(args.out.as_deref())?;
    Ok(report.pass)
}

fn cutcover(args: &CutArgs, s: &Settings) -> Result<bool> {
    let trees: Vec<WeightedTree> = match &args.tree {
        Some(p) => vec![model::deserialize(&read(p)?)?],
        None => {
            let c = Construction::build(args.m)?;
            [TreeKind::RedPrime, TreeKind::BluePrime]
                .iter()
                .map(|&k| c.tree(k).with_metric(Metric::Linf2, |_| ExactLength::ONE.into()))
                .collect::<tree_cover::Result<_>>()?
        }
    };
    let mut report = Report::new("cutcover", s.seed);
    report.results.insert("b".into(), json!(args.b));
    let mut cuts = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        let root = t.root().unwrap_or(0);
        let d = cut_decomposition(t, root, args.b)?;
        let short = d.check_short_pairs(t);
        let diam_ok = CutSide::BOTH.iter().all(|&side| d.max_diameter(side) <= d.diameter_bound());
        report.add(
            &format!("tree{i}"),
            diam_ok && short.is_ok(),
            json!({
                "components": [d.components(CutSide::A), d.components(CutSide::B)],
                "max_diameter": [d.max_diameter(CutSide::A), d.max_diameter(CutSide::B)],
                "diameter_bound": d.diameter_bound(),
                "short_pairs_checked": short.as_ref().ok(),
                "separated_pair": short.err(),
            }),
        )?;
        cuts.push(d);
    }
    if trees.iter().all(|t| t.sites().iter().all(|x| x.integer_coords().is_some())) {
        let parts: Vec<_> = trees.iter().zip(&cuts).collect();
        let m = cell_cover_multiplicity(&parts)?;
        let bound = 2 * trees.len();
        report.add("multiplicity", m.max <= bound, json!({ "result": m, "bound": bound }))?;
    }
    report.emit(args.out.as_deref())?;
    Ok(report.pass)
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let settings = Settings {
        seed: cli.seed.or(cfg.seed).unwrap_or(0),
        tolerance: cli.tolerance.or(cfg.tolerance).unwrap_or(verify::DEFAULT_TOLERANCE),
        d: cfg.d.unwrap_or(DEFAULT_D),
    };
    if !(settings.tolerance > 0.0) {
        bail!("tolerance must be positive");
    }
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| anyhow!("configuring {t} threads: {e}"))?;
    }
    match &cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(VerifyCommand::Grid(a)) => verify_grid(a, &settings),
        Command::Cover(a) => cover(a, &settings),
        Command::Stretch(a) => stretch(a, &settings),
        Command::Demo(DemoCommand::OneTree(a)) => one_tree(a, &settings),
        Command::Cube3d(a) => cube(a, &settings),
        Command::Cutcover(a) => cutcover(a, &settings),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
