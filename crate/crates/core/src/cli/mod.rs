//! The `rpsvm` command line.
//!
//! Exit codes: 0 success, 1 a checked inequality failed, 2 usage error,
//! 3 I/O or parse error, 4 numerical failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::experiments::Preset;
use crate::io::DataFormat;
use crate::sketch::SketchKind;
use crate::svm::Task;

/// Environment variable that fixes the worker thread count.
pub const THREADS_ENV: &str = "RPSVM_THREADS";

pub const EXIT_OK: u8 = 0;
pub const EXIT_BOUND_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "rpsvm", version, about = "Random projections for linear SVMs")]
pub struct Cli {
    /// Seed for every random choice made by the command. Defaults to 0,
    /// or to the configuration file's seed for `experiment`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project a dataset and write the result with an operator descriptor.
    Sketch(SketchArgs),
    /// Train an SVM and write the model as JSON.
    Train(TrainArgs),
    /// Apply a trained model, optionally through a stored sketch.
    Predict(PredictArgs),
    /// Cross-validated grid over sketch kinds and dimensions.
    Experiment(ExperimentArgs),
    /// Check the margin, radius and combined inequalities for sketched data.
    Verify(VerifyArgs),
    /// Evaluate the sample-size formulas for r.
    RecommendR(RecommendArgs),
    /// Write a synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Dataset file (LIBSVM, or dense CSV with label first).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    pub format: Option<DataFormat>,
    /// Synthetic preset used instead of an input file.
    #[arg(long, conflicts_with = "input")]
    pub preset: Option<Preset>,
}

#[derive(Debug, Args)]
pub struct SketchArgs {
    #[command(flatten)]
    pub data: InputArgs,
    #[arg(long, default_value = "srht")]
    pub kind: SketchKind,
    #[arg(long, short)]
    pub r: usize,
    /// Projected data; format follows the extension.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Operator descriptor path. Defaults to `<out>.sketch.json`.
    #[arg(long)]
    pub descriptor: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, value_parser = parse_task, default_value = "classification")]
    pub task: Task,
    /// Box constraint. Defaults to 1000 for classification and 1 for regression.
    #[arg(long = "C", alias = "c")]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub tube_epsilon: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_iter: u64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long, short)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: InputArgs,
    /// Sketch descriptor applied to the inputs before prediction.
    #[arg(long)]
    pub descriptor: Option<PathBuf>,
    /// One prediction per line. Stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// JSON run configuration. Flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub data: InputArgs,
    #[arg(long, value_parser = parse_task)]
    pub task: Option<Task>,
    #[arg(long, value_delimiter = ',')]
    pub kinds: Option<Vec<SketchKind>>,
    #[arg(long = "r", value_delimiter = ',')]
    pub r_values: Option<Vec<usize>>,
    #[arg(long = "C", alias = "c")]
    pub c: Option<f64>,
    #[arg(long)]
    pub tube_epsilon: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub cv_reps: Option<usize>,
    #[arg(long)]
    pub seed_reps: Option<usize>,
    /// Skip the unsketched reference row.
    #[arg(long)]
    pub no_full: bool,
    /// Output directory for report.csv, timings.csv, runs.jsonl and
    /// report.json. The summary CSV goes to stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub data: InputArgs,
    #[arg(long, value_delimiter = ',', default_value = "cw,sign,srht,gaussian")]
    pub kinds: Vec<SketchKind>,
    #[arg(long, short)]
    pub r: usize,
    /// Number of sketch seeds per kind.
    #[arg(long, default_value_t = 1)]
    pub seeds: usize,
    #[arg(long, value_parser = parse_task, default_value = "classification")]
    pub task: Task,
    #[arg(long = "C", alias = "c")]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub tube_epsilon: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_iter: u64,
    /// Approximation parameter of the enclosing balls.
    #[arg(long, default_value_t = crate::geometry::DEFAULT_APPROX_DELTA)]
    pub delta: f64,
    /// JSON lines output. Stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    /// Single kind to evaluate; all four when omitted.
    #[arg(long)]
    pub kind: Option<SketchKind>,
    #[arg(long)]
    pub rho: usize,
    /// Input dimension. Needed by the srht and sign formulas.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, conflicts_with_all = ["n", "d"])]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Real-valued targets `ŵᵀx + U[−noise, noise]` instead of labels.
    #[arg(long)]
    pub regression: bool,
    #[arg(long, requires = "regression")]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub noise: f64,
    #[arg(long, short)]
    pub out: PathBuf,
}

fn parse_format(s: &str) -> Result<DataFormat, String> {
    match s.to_ascii_lowercase().as_str() {
        "libsvm" | "svmlight" => Ok(DataFormat::Libsvm),
        "csv" => Ok(DataFormat::Csv),
        _ => Err(format!("unknown format {s:?}, expected libsvm or csv")),
    }
}

fn parse_task(s: &str) -> Result<Task, String> {
    match s.to_ascii_lowercase().as_str() {
        "classification" | "svc" => Ok(Task::Classification),
        "regression" | "svr" => Ok(Task::Regression),
        _ => Err(format!("unknown task {s:?}, expected classification or regression")),
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::DimensionMismatch(_) | Error::Capacity(_) => EXIT_USAGE,
        Error::Io(_) | Error::Json(_) | Error::Parse { .. } | Error::Empty(_) => EXIT_IO,
        Error::Degenerate(_)
        | Error::UndefinedMargin
        | Error::BoundVacuous { .. }
        | Error::NotConverged(_)
        | Error::Numerical(_) => EXIT_NUMERICAL,
    }
}

/// Parses `std::env::args`, runs the command and maps the outcome to an
/// exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code(&e));
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Runs a parsed command; `Ok` carries the exit code (0 or 1).
pub fn run(cli: Cli) -> crate::error::Result<u8> {
    let seed = cli.seed;
    match cli.command {
        Command::Sketch(a) => commands::sketch(a, seed.unwrap_or(0)),
        Command::Train(a) => commands::train(a, seed.unwrap_or(0)),
        Command::Predict(a) => commands::predict(a, seed.unwrap_or(0)),
        Command::Experiment(a) => commands::experiment(a, seed),
        Command::Verify(a) => commands::verify(a, seed.unwrap_or(0)),
        Command::RecommendR(a) => commands::recommend(a),
        Command::Synth(a) => commands::synth(a, seed.unwrap_or(0)),
    }
}

fn configure_threads() -> crate::error::Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV}={value:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("cannot size thread pool: {e}")))
}
