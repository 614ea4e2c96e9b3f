//! `netforge`: generate follower networks, evaluate expected in-degree
//! curves, and run batch experiments from the command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 I/O failure, 3 property
//! violation found by a check.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use netforge::experiment::{self, Sweep};
use netforge::formation::{check_meritocracy_equilibrium, HybridMixing};
use netforge::metrics::{MetricsOptions, PathMode, DEFAULT_XMIN};
use netforge::theory;
use netforge::{DirectedGraph, ExperimentError, ExperimentSpec, FormationConfig, ModelKind};

#[derive(Debug)]
enum Failure {
    Invalid(anyhow::Error),
    Io(anyhow::Error),
    Violation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Io(_) => 2,
            Failure::Violation(_) => 3,
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Io { .. } => Failure::Io(e.into()),
            other => Failure::Invalid(other.into()),
        }
    }
}

fn invalid<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Invalid(e.into())
}

type Outcome = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "netforge", version, about = "Meritocracy and Matthew-effect network formation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one graph and write it as an edge list
    Generate(GenerateArgs),
    /// Evaluate an expected in-degree curve
    Theory(TheoryArgs),
    /// Compute metrics for an edge-list file
    Metrics(MetricsArgs),
    /// Run the batch described by a spec file
    Experiment {
        #[arg(long)]
        spec: PathBuf,
        /// Output directory; overrides `outputs` in the spec
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gini sweep over hybrid mixing probabilities
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Normalize follower counts and compute their rank curve
    Empirical {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 5.0)]
        target_mean: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plots: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Merit,
    Matthew,
    Hybrid,
    Er,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Merit => ModelKind::Meritocracy,
            ModelArg::Matthew => ModelKind::Matthew,
            ModelArg::Hybrid => ModelKind::Hybrid,
            ModelArg::Er => ModelKind::ErDirected,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MixingArg {
    PerNode,
    PerEvent,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    /// ER edge probability; defaults to the density of an `M·n`-edge graph
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "per-node")]
    mixing: MixingArg,
    /// Edge-list path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Verify graph invariants (and the equilibrium for meritocracy)
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    Recursion,
    Exact,
    MeritApprox,
    MatthewApprox,
    MatthewInitial,
    Oracle,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long, value_enum)]
    formula: FormulaArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also require the exact meritocracy and Matthew curves to cross once
    #[arg(long)]
    check_crossing: bool,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_XMIN)]
    xmin: u32,
    /// Node count; inferred from the largest id when omitted
    #[arg(long)]
    n: Option<usize>,
    /// Estimate paths from this many random sources instead of all of them
    #[arg(long, conflicts_with = "no_paths")]
    sample_paths: Option<usize>,
    #[arg(long)]
    no_paths: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Io)
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => experiment::write_atomic(path, text.as_bytes()).map_err(Failure::from),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout").map_err(Failure::Io),
    }
}

/// Wall-clock stamp for provenance; `SOURCE_DATE_EPOCH` pins it for
/// reproducible output.
fn timestamp() -> String {
    let secs = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    format!("unix:{secs}")
}

fn generate(args: GenerateArgs) -> Outcome {
    let model = ModelKind::from(args.model);
    let density = args.density.unwrap_or_else(|| FormationConfig::matched_density(args.n, args.m));
    let config = FormationConfig::new(model, args.n, args.m, args.seed)
        .with_p(args.p)
        .with_density(density)
        .with_mixing(match args.mixing {
            MixingArg::PerNode => HybridMixing::PerNode,
            MixingArg::PerEvent => HybridMixing::PerEvent,
        });
    let g = netforge::generate(&config).map_err(invalid)?;
    if args.check {
        g.verify_invariants().map_err(Failure::Violation)?;
        if model == ModelKind::Meritocracy {
            check_meritocracy_equilibrium(&g, args.m).map_err(Failure::Violation)?;
        }
    }
    eprintln!("{} graph: n={}, edges={}, seed={}", model.as_str(), g.n(), g.edge_count(), args.seed);
    emit(args.out.as_deref(), &g.to_edge_list())
}

fn theory_cmd(args: TheoryArgs) -> Outcome {
    let (n, m) = (args.n, args.m);
    let curve = match args.formula {
        FormulaArg::Recursion => theory::recursion_table(n, m).map(|t| t.expected_indegree()),
        FormulaArg::Exact => theory::exact_expected_indegree(n, m),
        FormulaArg::MeritApprox => theory::merit_approx_curve(n, m),
        FormulaArg::MatthewApprox => theory::matthew_approx_curve(n, m),
        // the approximation call only validates n and m
        FormulaArg::MatthewInitial => theory::matthew_approx_curve(n, m).map(|_| theory::matthew_initial_curve(n)),
        FormulaArg::Oracle => theory::brute_force_oracle(n, m),
    }
    .map_err(invalid)?;
    emit(args.out.as_deref(), &curve.to_csv())?;
    if args.check_crossing {
        let merit = theory::exact_expected_indegree(n, m).map_err(invalid)?;
        let matthew = theory::matthew_approx_curve(n, m).map_err(invalid)?;
        let report = theory::single_crossing_index(&merit.values, &matthew.values).map_err(invalid)?;
        eprintln!("crossing: {} sign change(s), first at rank {:?}", report.sign_changes, report.crossing_rank);
        if !report.is_single_crossing() {
            return Err(Failure::Violation(format!(
                "expected exactly one crossing, found {}",
                report.sign_changes
            )));
        }
    }
    Ok(())
}

fn metrics_cmd(args: MetricsArgs) -> Outcome {
    let text = read(&args.input)?;
    let g = match args.n {
        Some(n) => DirectedGraph::from_edge_list(&text, n),
        None => DirectedGraph::from_edge_list_inferred(&text),
    }
    .with_context(|| format!("parsing {}", args.input.display()))
    .map_err(Failure::Invalid)?;
    if args.xmin < 1 {
        return Err(Failure::Invalid(anyhow!("xmin must be at least 1")));
    }
    let paths = match (args.no_paths, args.sample_paths) {
        (true, _) => PathMode::Skip,
        (false, Some(k)) => PathMode::Sampled(k),
        (false, None) => PathMode::Exact,
    };
    let report = netforge::MetricsReport::compute(&g, &MetricsOptions { xmin: args.xmin, paths, sample_seed: 0 });
    let mut json = serde_json::to_string_pretty(&report).map_err(invalid)?;
    json.push('\n');
    emit(args.out.as_deref(), &json)
}

fn experiment_cmd(spec_path: &Path, out: Option<PathBuf>) -> Outcome {
    let spec = ExperimentSpec::load(spec_path)?;
    let dir = out
        .or_else(|| spec.outputs.clone())
        .ok_or_else(|| Failure::Invalid(anyhow!("no output directory: pass --out or set `outputs` in the spec")))?;
    let written = match &spec.sweep {
        Some(Sweep::P(ps)) => experiment::export_sweep(&experiment::hybrid_sweep(&spec, ps)?, &dir, spec.emit_plots)?,
        Some(Sweep::N(ns)) => experiment::export_scaling(&experiment::small_world_scaling(&spec, ns)?, &dir)?,
        None => {
            let mut result = experiment::run_batch(&spec)?;
            result.provenance.timestamp = Some(timestamp());
            experiment::export_results(&result, &dir, spec.emit_plots)?
        }
    };
    report_written(&written);
    Ok(())
}

fn sweep_cmd(spec_path: &Path, ps: &[f64], out: &Path) -> Outcome {
    let spec = ExperimentSpec::load(spec_path)?;
    let table = experiment::hybrid_sweep(&spec, ps)?;
    for row in &table.rows {
        eprintln!("p={:<6} gini={:.4} (sd {:.4})", row.p, row.gini_mean, row.gini_sd);
    }
    report_written(&experiment::export_sweep(&table, out, spec.emit_plots)?);
    Ok(())
}

fn empirical_cmd(input: &Path, target_mean: f64, out: &Path, plots: bool) -> Outcome {
    let result = experiment::empirical_ingest(input, target_mean)?;
    eprintln!("{} accounts, gini={:.4}", result.n, result.gini);
    report_written(&experiment::export_empirical(&result, out, plots)?);
    Ok(())
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which is reserved for I/O here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Theory(args) => theory_cmd(args),
        Command::Metrics(args) => metrics_cmd(args),
        Command::Experiment { spec, out } => experiment_cmd(&spec, out),
        Command::Sweep { spec, p, out } => sweep_cmd(&spec, &p, &out),
        Command::Empirical { input, target_mean, out, plots } => empirical_cmd(&input, target_mean, &out, plots),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Invalid(e) | Failure::Io(e) => eprintln!("error: {e:#}"),
                Failure::Violation(msg) => eprintln!("property violation: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
