//! `tiled-adapt`: harvest tiles, solve with tiled pools, sweep lattices,
//! certify pool completeness, and compute exact baselines.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<tiled_adapt::Error> for CliError {
    fn from(e: tiled_adapt::Error) -> Self {
        match e {
            tiled_adapt::Error::NoConvergence { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

#[derive(Parser)]
#[command(name = "tiled-adapt", version, about = "ADAPT-VQE with operator pool tiling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated trials on a small lattice with the full Pauli pool and collect the chosen operators.
    Harvest(RunArgs),
    /// Run ADAPT on one lattice and compare with the exact ground energy.
    Solve(RunArgs),
    /// Solve every (geometry, J_z) cell listed in `[sweep]`.
    Sweep(RunArgs),
    /// Check Lie-closure completeness of a tile set and its tilings.
    Certify(RunArgs),
    /// Exact ground energy of the configured lattice.
    Exact(RunArgs),
}

#[derive(clap::Args)]
pub struct RunArgs {
    /// Experiment configuration (TOML).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Overrides `[adapt] seed`.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Overrides `[harvest] trials`.
    #[arg(long, value_name = "N")]
    pub trials: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Harvest(a) => commands::harvest(a),
        Command::Solve(a) => commands::solve(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Certify(a) => commands::certify(a),
        Command::Exact(a) => commands::exact(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tiled-adapt: {e}");
            ExitCode::from(match e {
                CliError::Config(_) => 1,
                CliError::Numerical(_) => 2,
            })
        }
    }
}
