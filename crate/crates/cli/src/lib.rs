//! Batch front-end for `threewave-core`.
//!
//! ```text
//! threewave <simulate|phases|verify|surface> --config <path> [--out <path>] [--samples N] [--mesh L]
//! ```
//!
//! Exit codes: 0 ok, 1 verify failure, 2 config error, 3 numeric failure,
//! 4 not periodic.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use threewave_core::Error;

pub use config::ExperimentConfig;

#[derive(Debug, Parser)]
#[command(name = "threewave", version, about = "Reconstruction phases of the three-wave interaction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// JSON configuration file
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `samples` from the configuration
    #[arg(long)]
    pub samples: Option<usize>,
    /// Overrides `mesh` from the configuration
    #[arg(long)]
    pub mesh: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the full flow and write a CSV of states and invariants
    Simulate(CommonArgs),
    /// Compute the reconstruction phases of one period and write a JSON report
    Phases(CommonArgs),
    /// Run the invariant checks and print a PASS/FAIL table
    Verify(CommonArgs),
    /// Write a CSV of the cap triangulation and the reduced orbit
    Surface(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    VerifyFailed = 1,
    ConfigError = 2,
    NumericFailure = 3,
    NotPeriodic = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Numeric(#[from] Error),
    #[error("output error: {0}")]
    Io(String),
    #[error("{0} check(s) failed")]
    VerifyFailed(usize),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Config(_) => ExitStatus::ConfigError,
            CliError::Numeric(Error::NotPeriodic) => ExitStatus::NotPeriodic,
            CliError::Numeric(_) | CliError::Io(_) => ExitStatus::NumericFailure,
            CliError::VerifyFailed(_) => ExitStatus::VerifyFailed,
        }
    }
}

fn load(args: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(n) = args.samples {
        cfg.samples = n;
    }
    if let Some(l) = args.mesh {
        cfg.mesh = l;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs one subcommand, reporting errors on stderr.
pub fn run(cli: &Cli) -> ExitStatus {
    let result = match &cli.command {
        Command::Simulate(a) => load(a).and_then(|c| commands::simulate(&c, a.out.as_deref())),
        Command::Phases(a) => load(a).and_then(|c| commands::phases(&c, a.out.as_deref())),
        Command::Verify(a) => load(a).and_then(|c| verify::run(&c, a.out.as_deref())),
        Command::Surface(a) => load(a).and_then(|c| commands::surface(&c, a.out.as_deref())),
    };
    match result {
        Ok(()) => ExitStatus::Ok,
        Err(e) => {
            eprintln!("threewave: {e}");
            e.status()
        }
    }
}
