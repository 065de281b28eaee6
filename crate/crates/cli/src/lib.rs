//! Command-line front end: config parsing, command dispatch, table output
//! and the acceptance runner.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use landaucap_core::Error as CoreError;

use crate::config::{check_precision, ExperimentConfig};
use crate::output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                CoreError::InvalidRegion(_)
                | CoreError::InvalidArgument(_)
                | CoreError::OverlappingUnion
                | CoreError::DegenerateWeight(_)
                | CoreError::OracleNotApplicable
                | CoreError::WindowTooSmall { .. }
                | CoreError::DegenerateSample
                | CoreError::BoundsNotDerivable => 2,
                CoreError::TooFewConverged { .. } | CoreError::RootFinder { .. } => 3,
                CoreError::DegenerateMoments { .. }
                | CoreError::DegenerateMomentMatrix { .. }
                | CoreError::NotHermitian { .. }
                | CoreError::TrustedTailTooShort { .. }
                | CoreError::ProvenanceMismatch(_)
                | CoreError::CoefficientOverflow => 4,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Capacity,
    Orthopoly,
    Toeplitz,
    Verify,
    Predict,
}

#[derive(Debug, Parser)]
#[command(name = "landaucap", version, about = "Toeplitz eigenvalues, orthogonal polynomial norms and logarithmic capacity")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Suite name for `verify`: lemma1, lemma2-q1, theorem1, theorem2,
    /// theorem3 or properties.
    pub suite: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub precision: Option<u32>,
    /// Cross-check radial cases against the closed-form diagonal.
    #[arg(long)]
    pub oracle: bool,
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, CliError> {
    let Ok(v) = std::env::var("LANDAUCAP_THREADS") else {
        return Ok(None);
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("LANDAUCAP_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))
}

/// Runs one invocation and returns the process exit code. Diagnostics go to
/// stderr; tables go to the output file or stdout.
pub fn run(cli: &Cli) -> i32 {
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("landaucap: {e}");
            return e.exit_code();
        }
    };
    let go = || match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("landaucap: {e}");
            e.exit_code()
        }
    };
    match pool {
        Some(p) => p.install(go),
        None => go(),
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    if let Some(p) = cli.precision {
        check_precision(p)?;
    }
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None if cli.command == Command::Verify => ExperimentConfig::default(),
        None => return Err(CliError::Config("--config <file> is required".into())),
    };
    if cli.command == Command::Verify {
        return verify(cli, &cfg);
    }
    if cli.suite.is_some() {
        return Err(CliError::Config("a suite name is only accepted by `verify`".into()));
    }
    let report = match cli.command {
        Command::Capacity => commands::cmd_capacity(&cfg)?,
        Command::Orthopoly => commands::cmd_orthopoly(&cfg, cli.precision)?,
        Command::Toeplitz => commands::cmd_toeplitz(&cfg, cli.precision, cli.oracle)?,
        Command::Predict => commands::cmd_predict(&cfg, cli.precision)?,
        Command::Verify => unreachable!(),
    };
    let format = cli.format.or(cfg.format).unwrap_or_default();
    emit(&report.render(format), cli.output.as_ref().or(cfg.output.as_ref()))?;
    Ok(0)
}

fn verify(cli: &Cli, cfg: &ExperimentConfig) -> Result<i32, CliError> {
    let name = cli
        .suite
        .clone()
        .or_else(|| cfg.suite.clone())
        .ok_or_else(|| CliError::Config(format!("verify needs a suite: one of {:?}", verify::SUITES)))?;
    let criteria = verify::run_suite(&name)
        .ok_or_else(|| CliError::Config(format!("unknown suite {name:?}; expected one of {:?}", verify::SUITES)))?;
    let mut text = String::new();
    for c in &criteria {
        for check in &c.checks {
            text.push_str(&check.line());
            text.push('\n');
        }
        text.push_str(&c.summary_line());
        text.push('\n');
    }
    emit(&text, cli.output.as_ref().or(cfg.output.as_ref()))?;
    Ok(if criteria.iter().all(|c| c.passed()) { 0 } else { 1 })
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}"))),
    }
}
