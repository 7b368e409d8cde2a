//! `htc`: eigen reports, spectra and parameter sweeps from a TOML config.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use htc_core::HtcError;
use thiserror::Error;

use crate::config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Numerical(#[from] HtcError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::Output { .. } => 1,
            Self::Numerical(e) => match e {
                HtcError::InvalidParams { .. }
                | HtcError::InvalidArgument(_)
                | HtcError::BasisTooLarge { .. } => 1,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "htc",
    version,
    about = "Holstein–Tavis–Cummings spectra by exact diagonalization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML configuration file; defaults are used for missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Worker threads for sweeps and grid evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Override a config key, e.g. `--set n_molecules=4`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-state eigen report.
    Eig,
    /// Absorption, bound absorption and leakage photoluminescence.
    Spectra,
    /// Critical coupling for every (N, λ²) pair of the sweep lists.
    SweepCritical,
    /// Lower-polariton emission versus pump frequency.
    SweepIlp,
}

fn execute(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let config = RunConfig::load(cli.config.as_deref(), &cli.overrides)?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    std::fs::create_dir_all(&cli.out).map_err(|source| CliError::Output {
        path: cli.out.clone(),
        source,
    })?;
    let ctx = run::Context {
        config,
        out: cli.out.clone(),
        format: cli.format,
    };
    match cli.command {
        Command::Eig => run::eig(&ctx),
        Command::Spectra => run::spectra(&ctx),
        Command::SweepCritical => run::sweep_critical(&ctx),
        Command::SweepIlp => run::sweep_ilp(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("htc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
