//! `fracfvt`: final-value experiments, FODE periodicity scans and the
//! verification suite.
//!
//! Exit codes: 0 when every record passes (or is inconclusive), 1 on a
//! numeric failure, 2 on a usage or configuration error.

mod config;
mod fode;
mod fvt;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::Config;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Report(#[from] fracfvt_core::report::ReportError),
}

/// Whether a finished command found a numeric failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Failed,
}

#[derive(Debug, Parser)]
#[command(name = "fracfvt", version, about = "Generalized final-value theorem and Caputo FODE experiments")]
struct Cli {
    /// TOML file with [fvt], [fode] and [verify] tables; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cross-validate classical, Cesàro and kernel-integral limits for one
    /// catalog function over a list of orders.
    Fvt(FvtArgs),
    /// Solve a Caputo FODE and scan it for periodic behaviour.
    Fode(FodeArgs),
    /// Run the acceptance suite and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FvtArgs {
    /// Catalog function name.
    #[arg(long = "fn")]
    pub function: Option<String>,
    /// Orders, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Option<Vec<f64>>,
    /// Power q of t^q sin(ωt) (tq_sin only).
    #[arg(long)]
    pub q: Option<f64>,
    /// Frequency ω of t^q sin(ωt) (tq_sin only).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Frequency-side schedule, decreasing, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub s_seq: Option<Vec<f64>>,
    /// Time-side probes, increasing, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub t_probes: Option<Vec<f64>>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// JSON report path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV summary path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FodeArgs {
    /// Right-hand side from the registry.
    #[arg(long)]
    pub rhs: Option<String>,
    /// Right-hand side parameter, `name=value`; repeatable.
    #[arg(long = "param")]
    pub params: Vec<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Initial state, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x0: Option<Vec<f64>>,
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Step size.
    #[arg(long)]
    pub h: Option<f64>,
    /// Candidate periods as `lo:hi:count`.
    #[arg(long)]
    pub scan: Option<String>,
    /// Length of the comparison window.
    #[arg(long)]
    pub window: Option<f64>,
    /// Transient discarded before the window (default 20% of the horizon).
    #[arg(long)]
    pub t_skip: Option<f64>,
    /// Residual floor separating periodic from non-periodic.
    #[arg(long)]
    pub floor: Option<f64>,
    /// JSON report path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV path for the residual curve (columns T, residual).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only these groups (specfun, fraccalc, xform, fvt, fode).
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<String>>,
    /// Multiplier on every upper-bound tolerance.
    #[arg(long)]
    pub tol_scale: Option<f64>,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FRACFVT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("FRACFVT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<Verdict, CliError> {
    configure_threads()?;
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Fvt(args) => fvt::run(args, &config.fvt),
        Command::Fode(args) => fode::run(args, &config.fode),
        Command::Verify(args) => verify::run(args, &config.verify),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
