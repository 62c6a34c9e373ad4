//! The `hopfchain` command line.
//!
//! Exit codes: 0 when every requested check passed, 1 when a check failed,
//! 2 on usage, parse, precondition or I/O errors.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::qcalc::{parse_rational, Rational};

pub use config::{merge_config, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{flag}: {source}")]
    Flag { flag: &'static str, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("run file line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn positive_rational_arg(text: &str) -> Result<Rational, String> {
    let q = rational_arg(text)?;
    crate::qcalc::ensure_positive(&q).map_err(|e| e.to_string())?;
    Ok(q)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "hopfchain",
    version,
    about = "Hopf square chains on the E,K quantum-group subalgebra",
    args_override_self = true
)]
pub struct Cli {
    /// Run file of `key = value` lines; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symbolic Hopf algebra operations on a monomial `E^i K^l`.
    #[command(args_override_self = true)]
    Hopf(HopfArgs),
    /// Tabulate the extracted chain of one grading.
    #[command(args_override_self = true)]
    Chain(ChainArgs),
    /// Exact analysis of the unit-step chain.
    #[command(args_override_self = true)]
    Analyze(AnalyzeArgs),
    /// Monte Carlo estimate of `E[X_n] / n`.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Empirical growth bounds over a grid of horizons.
    #[command(args_override_self = true)]
    Bounds(BoundsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HopfAction {
    Square,
    Coproduct,
    Antipode,
    Verify,
}

#[derive(Debug, Args)]
pub struct HopfArgs {
    #[arg(value_enum)]
    pub action: HopfAction,
    /// Monomial such as "E^2 K^-1".
    pub expr: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub max_i: u32,
    #[arg(long, default_value_t = 2)]
    pub max_l: i64,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[arg(long)]
    pub grading: u32,
    #[arg(long, value_parser = positive_rational_arg)]
    pub q: Rational,
    #[arg(long)]
    pub max_state: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AnalyzeAction {
    Dist,
    Hit,
    Phase,
    Martingale,
    Variance,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Method {
    #[default]
    Dp,
    Formula,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(value_enum)]
    pub action: AnalyzeAction,
    #[arg(long, value_parser = positive_rational_arg)]
    pub q: Option<Rational>,
    /// Explicit failure probabilities `α(0), α(1), ...` instead of a geometric law.
    #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
    pub alpha: Option<Vec<Rational>>,
    /// Horizon (time) `n`.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    pub method: Method,
    /// Compare against an independent computation; exit 1 on mismatch.
    #[arg(long)]
    pub crosscheck: bool,
    /// Target state for hitting times.
    #[arg(long = "target", visible_alias = "N")]
    pub target: Option<u64>,
    #[arg(long)]
    pub max_state: Option<u64>,
    #[arg(long, value_delimiter = ',', value_parser = positive_rational_arg)]
    pub q_list: Option<Vec<Rational>>,
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<u64>>,
    /// Certified fixed-point bounds instead of exact ratios (phase scans).
    #[arg(long)]
    pub enclose: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = positive_rational_arg)]
    pub q: Rational,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1000)]
    pub traj: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Simulate the extracted chain of this grading.
    #[arg(long, default_value_t = 1)]
    pub grading: u32,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Emit one sampled path instead of the estimate.
    #[arg(long)]
    pub path: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_parser = positive_rational_arg)]
    pub q: Rational,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 1000)]
    pub traj: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub multiplier: u32,
    #[arg(long, default_value_t = 10)]
    pub slack: u32,
    #[arg(long)]
    pub workers: Option<usize>,
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub body: String,
    /// Printed to stdout when the body goes to a file.
    pub summary: Option<String>,
    pub passed: bool,
    /// Printed to stderr when a check fails.
    pub failure: Option<String>,
}

/// Parses `args` (program name first), runs the command, and returns the exit code.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let args: Vec<OsString> = args.into_iter().collect();
    let root = Cli::command();
    let args = match merge_config(args, &root) {
        Ok(args) => args,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(&cli) {
        Ok(outcome) => match emit(&cli, &outcome) {
            Ok(()) => {
                if let Some(msg) = &outcome.failure {
                    eprintln!("check failed: {msg}");
                }
                if outcome.passed {
                    0
                } else {
                    1
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &outcome.body).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            if let Some(summary) = &outcome.summary {
                println!("{summary}");
            }
        }
        None => print!("{}", outcome.body),
    }
    Ok(())
}
