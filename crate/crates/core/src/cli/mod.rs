//! The `mdms` command-line tool.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input, 3 bad parameter,
//! 4 oracle size guard, 5 guarantee violation found by `verify`.

mod commands;
mod ingest;
mod record;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

pub use record::{provenance_hash, RunRecord, CSV_HEADER};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_PARAMETER: u8 = 3;
pub const EXIT_SIZE_GUARD: u8 = 4;
pub const EXIT_VIOLATION: u8 = 5;

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub(crate) fn parse(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, message: message.into() }
    }

    pub(crate) fn parameter(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARAMETER, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Parse(_) | Error::Csv(_) | Error::Input(_) | Error::Metric(_) => EXIT_PARSE,
            Error::TooLarge { .. } => EXIT_SIZE_GUARD,
            Error::Parameter(_) | Error::IndexOutOfRange { .. } | Error::AlreadySelected(_) | Error::Infeasible(_) => {
                EXIT_PARAMETER
            }
        };
        CliError { code, message: e.to_string() }
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "mdms", version, about = "Max-min diversification with a submodular utility")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance family and write instance and utility JSON.
    Gen(GenArgs),
    /// Run one algorithm (or `all`) on an instance.
    Solve(SolveArgs),
    /// Run algorithms over a list of k values and seeds, one CSV row per cell.
    Sweep(SweepArgs),
    /// Compare every algorithm against the exhaustive optimum.
    Verify(VerifyArgs),
    /// Select points from a JSON-lines embedding file.
    Ingest(IngestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Gaussian,
    GreedyHard,
    Counterexample,
    Clique,
    IndependentSet,
    Cover,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension of the Gaussian points.
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.95)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.75)]
    pub beta: f64,
    /// Perturbation of the greedy-hard distances.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Counterexample with `w(v) = 2` instead of `g = 0`.
    #[arg(long)]
    pub monotone: bool,
    /// Graph JSON `{"n", "edges"}` for the clique and independent-set families.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Degree bound for a random graph when no graph file is given.
    #[arg(long, default_value_t = 3)]
    pub max_degree: usize,
    /// Edge probability for a random graph.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Set family JSON `{"sets": [[..]], "groups": [..]?}` for the cover family.
    #[arg(long)]
    pub sets: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub instance_out: PathBuf,
    #[arg(long)]
    pub utility_out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub utility: PathBuf,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// `geometric` or `exhaustive`.
    #[arg(long, default_value = "geometric")]
    pub schedule: String,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub k: usize,
    /// gist, gist-exhaustive, simple, greedy, random, brute-force or all.
    #[arg(long, default_value = "gist")]
    pub algorithm: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Sweep GIST thresholds in parallel.
    #[arg(long)]
    pub parallel: bool,
    /// Keep greedy running on negative gains.
    #[arg(long)]
    pub greedy_all_steps: bool,
    /// Write 0 for wall_time_ms so output is byte-stable.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated k values, or `start:stop:step` (inclusive).
    #[arg(long)]
    pub k_list: String,
    /// Comma-separated algorithm names, or `all`.
    #[arg(long, default_value = "all")]
    pub algorithms: String,
    /// Comma-separated seeds.
    #[arg(long, default_value = "0")]
    pub seeds: String,
    /// Run cells in parallel. Row order is unaffected.
    #[arg(long)]
    pub parallel: bool,
    /// Keep greedy running on negative gains.
    #[arg(long)]
    pub greedy_all_steps: bool,
    /// Write 0 for wall_time_ms so output is byte-stable.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IngestUtility {
    Margin,
    MarginSimilarity,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// JSON lines `{"embedding": [..], "uncertainty": u}`.
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long, value_enum, default_value = "margin")]
    pub utility: IngestUtility,
    /// Weight of the margin score; lambda defaults to `1 - alpha`.
    #[arg(long, default_value_t = 0.9)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.9)]
    pub alpha_s: f64,
    #[arg(long, default_value_t = 0.1)]
    pub beta_s: f64,
    /// CSV rows `i,j[,s]` without header; missing `s` is the cosine similarity.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value = "geometric")]
    pub schedule: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

fn execute(command: &Command) -> CliResult<u8> {
    match command {
        Command::Gen(a) => commands::gen(a),
        Command::Solve(a) => commands::solve(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Verify(a) => commands::verify(a),
        Command::Ingest(a) => ingest::ingest(a),
    }
}
