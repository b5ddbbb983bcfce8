mod formats;
mod svg;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use floorplan_core::instances::{leaf_bound, InstanceSpec};
use floorplan_core::layout::floorplan_with_tree;
use floorplan_core::ost::{min_leaf_ost, OrderlySpanningTree, SpanningTree};
use floorplan_core::validator::{validate, ShapeTag, ValidationReport};
use floorplan_core::PlaneTriangulation;
use rayon::prelude::*;

use formats::{GraphFile, PlanFile, Provenance};
use svg::SvgOptions;

#[derive(Parser)]
#[command(name = "floorplan", version, about = "Floor-plans of plane triangulations with I, L and T modules")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a triangulation.
    Gen(GenArgs),
    /// Build the floor-plan of a graph file.
    Plan(PlanArgs),
    /// Check a plan file against its graph.
    Validate(ValidateArgs),
    /// Draw a plan file as SVG.
    Render(RenderArgs),
    /// Run the pipeline over many generated instances and print CSV.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Stacked insertion; flips only if `--flips` is given.
    Random,
    /// Stacked insertion followed by random flips (default 2n).
    Flipped,
    /// Nested triangles.
    Nested,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, value_enum, default_value_t = Kind::Random)]
    kind: Kind,
    #[arg(long)]
    flips: Option<usize>,
}

impl InstanceArgs {
    fn spec(&self, n: usize, seed: u64) -> InstanceSpec {
        match (self.kind, self.flips) {
            (Kind::Random, None | Some(0)) => InstanceSpec::stacked(n, seed),
            (Kind::Random, Some(f)) => InstanceSpec::flipped(n, seed, f),
            (Kind::Flipped, f) => InstanceSpec::flipped(n, seed, f.unwrap_or(2 * n)),
            (Kind::Nested, _) => InstanceSpec::nested(n),
        }
    }
}

fn node_count(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("`{s}` is not a node count"))?;
    if n < 3 {
        return Err("a triangulation needs at least 3 nodes".into());
    }
    Ok(n)
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_parser = node_count)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SvgArgs {
    /// Draw the unit grid.
    #[arg(long)]
    grid: bool,
    /// Pixels per grid unit.
    #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..=1000))]
    cell: u32,
}

#[derive(Args)]
struct PlanArgs {
    /// Graph file.
    input: PathBuf,
    /// Plan file to write; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run every check and exit 1 on any finding.
    #[arg(long)]
    validate: bool,
    /// Also write an SVG drawing.
    #[arg(long, value_name = "SVG")]
    render: Option<PathBuf>,
    /// Use this tree file instead of choosing one.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Write the tree used.
    #[arg(long, value_name = "FILE")]
    write_tree: Option<PathBuf>,
    #[command(flatten)]
    svg: SvgArgs,
}

#[derive(Args)]
struct ValidateArgs {
    plan: PathBuf,
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    plan: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    svg: SvgArgs,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Node counts: comma-separated values or inclusive ranges `a..b` or
    /// `a..b:step`.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<String>,
    /// Seeds per node count.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed_start: u64,
    /// Also run the validator on every plan.
    #[arg(long)]
    validate: bool,
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => print_stdout(text),
    }
}

/// Writes to standard output; a closed pipe is not an error.
fn print_stdout(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn load_graph(path: &Path) -> Result<(PlaneTriangulation, Option<String>), Failure> {
    let file = GraphFile::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let g = file.to_graph().map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok((g, file.source))
}

fn load_plan(path: &Path) -> Result<PlanFile, Failure> {
    PlanFile::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn histogram(r: &ValidationReport) -> String {
    let mut s = String::new();
    for t in ShapeTag::ALL {
        let _ = write!(s, " {}={}", t.name(), r.shape_count(t));
    }
    s
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    let spec = a.instance.spec(a.n, a.seed);
    let g = spec.generate().map_err(|e| Failure::Usage(e.to_string()))?;
    let text = GraphFile::from_graph(&g, Some(spec.to_string())).to_string();
    write_or_print(a.out.as_deref(), &text)
}

fn cmd_plan(a: PlanArgs) -> Result<(), Failure> {
    let (g, source) = load_graph(&a.input)?;
    let t = match &a.tree {
        Some(path) => {
            let (root, parent) = formats::parse_tree(&read(path)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            if parent.len() != g.node_count() {
                return Err(Failure::Usage(format!("{}: tree size does not match the graph", path.display())));
            }
            OrderlySpanningTree::annotate(&g, &SpanningTree { root, parent })
                .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?
        }
        None => min_leaf_ost(&g).map_err(|e| Failure::Invalid(e.to_string()))?,
    };
    let fp = floorplan_with_tree(&g, &t).map_err(|e| Failure::Invalid(e.to_string()))?;
    let file = PlanFile {
        provenance: Provenance {
            source: source.unwrap_or_else(|| format!("kind=explicit n={}", g.node_count())),
            root: t.root(),
            leaves: t.leaf_count(),
            tool: formats::tool_version(),
        },
        plan: fp,
    };
    write_or_print(a.out.as_deref(), &file.to_string())?;
    if let Some(p) = &a.write_tree {
        write_or_print(Some(p), &formats::write_tree(&t))?;
    }
    if let Some(p) = &a.render {
        write_or_print(Some(p), &svg::render(&file.plan, SvgOptions { cell: a.svg.cell, grid: a.svg.grid }))?;
    }
    let report = if a.validate {
        validate(&file.plan, &g, Some(t.leaf_count()))
    } else {
        floorplan_core::validator::check_shapes(&file.plan)
    };
    let summary = format!(
        "size {} {} leaves {}{}",
        file.plan.height(),
        file.plan.width(),
        t.leaf_count(),
        histogram(&report)
    );
    if a.out.is_some() {
        print_stdout(&format!("{summary}\n"))?;
    } else {
        eprintln!("{summary}");
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if a.validate && !report.pass() {
        return Err(Failure::Invalid(report.to_string()));
    }
    Ok(())
}

fn cmd_validate(a: ValidateArgs) -> Result<(), Failure> {
    let file = load_plan(&a.plan)?;
    let (g, _) = load_graph(&a.graph)?;
    let report = validate(&file.plan, &g, Some(file.provenance.leaves));
    print_stdout(&report.to_string())?;
    if report.pass() {
        Ok(())
    } else {
        Err(Failure::Invalid(report.summary().to_string()))
    }
}

fn cmd_render(a: RenderArgs) -> Result<(), Failure> {
    let file = load_plan(&a.plan)?;
    write_or_print(a.out.as_deref(), &svg::render(&file.plan, SvgOptions { cell: a.svg.cell, grid: a.svg.grid }))
}

/// Parses `7`, `3..9` or `10..100:10` into node counts.
fn parse_counts(items: &[String]) -> Result<Vec<usize>, Failure> {
    let bad = |s: &str| Failure::Usage(format!("bad node count `{s}`"));
    let mut out = Vec::new();
    for item in items {
        let item = item.trim();
        if let Some((lo, rest)) = item.split_once("..") {
            let (hi, step) = rest.split_once(':').unwrap_or((rest, "1"));
            let lo: usize = lo.parse().map_err(|_| bad(item))?;
            let hi: usize = hi.parse().map_err(|_| bad(item))?;
            let step: usize = step.parse().map_err(|_| bad(item))?;
            if step == 0 || hi < lo {
                return Err(bad(item));
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(item.parse().map_err(|_| bad(item))?);
        }
    }
    if let Some(&n) = out.iter().find(|&&n| n < 3) {
        return Err(Failure::Usage(format!("node count {n} is below 3")));
    }
    Ok(out)
}

struct Row {
    spec: InstanceSpec,
    height: u32,
    width: u32,
    leaves: usize,
    valid: &'static str,
    micros: u128,
}

fn stats_row(spec: InstanceSpec, check: bool) -> Result<Row, String> {
    let g = spec.generate().map_err(|e| format!("{spec}: {e}"))?;
    let start = Instant::now();
    let t = min_leaf_ost(&g).map_err(|e| format!("{spec}: {e}"))?;
    let fp = floorplan_with_tree(&g, &t).map_err(|e| format!("{spec}: {e}"))?;
    let micros = start.elapsed().as_micros();
    let valid = if check {
        if validate(&fp, &g, Some(t.leaf_count())).pass() {
            "yes"
        } else {
            "no"
        }
    } else {
        "skipped"
    };
    Ok(Row { spec, height: fp.height(), width: fp.width(), leaves: t.leaf_count(), valid, micros })
}

fn cmd_stats(a: StatsArgs) -> Result<(), Failure> {
    let counts = parse_counts(&a.n)?;
    let seeds = if a.instance.kind == Kind::Nested { 1 } else { a.seeds };
    let specs: Vec<InstanceSpec> = counts
        .iter()
        .flat_map(|&n| (a.seed_start..a.seed_start + seeds).map(move |s| (n, s)))
        .map(|(n, s)| a.instance.spec(n, s))
        .collect();
    let run = || specs.par_iter().map(|s| stats_row(*s, a.validate)).collect::<Vec<_>>();
    let rows = match a.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Failure::Usage(e.to_string()))?
            .install(run),
        None => run(),
    };
    let mut out = String::from(
        "kind,n,seed,flips,height,width,leaves,leaf_bound,height_margin,width_margin,valid,micros\n",
    );
    let mut failed = false;
    for row in rows {
        match row {
            Ok(r) => {
                let n = r.spec.n;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.spec.kind.name(),
                    n,
                    r.spec.seed,
                    r.spec.flips,
                    r.height,
                    r.width,
                    r.leaves,
                    leaf_bound(n),
                    (n - 1) as i64 - r.height as i64,
                    leaf_bound(n) as i64 - r.width as i64,
                    r.valid,
                    r.micros
                );
                failed |= r.valid == "no";
            }
            Err(e) => {
                eprintln!("error: {e}");
                failed = true;
            }
        }
    }
    write_or_print(None, &out)?;
    if failed {
        Err(Failure::Invalid("some instances failed".into()))
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Plan(a) => cmd_plan(a),
        Cmd::Validate(a) => cmd_validate(a),
        Cmd::Render(a) => cmd_render(a),
        Cmd::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprint!("{msg}");
            if !msg.ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
