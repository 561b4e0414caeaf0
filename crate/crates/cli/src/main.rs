use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

mod commands;
mod output;
mod source;
mod verify;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "linopt", version, about = "Linear-optics simulation, sampling and phase-estimation sweeps")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Root seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: available cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Also require n ≤ m^{1/6} for sampling instances
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw output configurations from the exact distribution
    Sample(commands::SampleArgs),
    /// Print the full output distribution
    Distribution(commands::DistributionArgs),
    /// Phase-sensitivity sweep over photon number
    Sensitivity(commands::SensitivityArgs),
    /// Run a cross-oracle verification suite
    Verify(verify::VerifyArgs),
    /// Wigner function of a photon-added coherent state on a grid
    Wigner(commands::WignerArgs),
    /// Post-selection statistics of photon-added coherent inputs
    Pacs(commands::PacsArgs),
    /// Shot-noise and Heisenberg baselines
    Baselines(commands::BaselinesArgs),
    /// Factorise a unitary into a coupler mesh
    Reck(commands::MatrixArgs),
    /// Real orthogonal representation of a unitary
    Embed(commands::MatrixArgs),
}

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<linopt::Error> for CliError {
    fn from(e: linopt::Error) -> Self {
        Self::usage(e.to_string())
    }
}

/// Parameters echoed into the output header.
pub fn params<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialise")
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(k) = cli.run.threads {
        if k == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    }
    let rc = &cli.run;
    match &cli.command {
        Command::Sample(a) => commands::sample(rc, a),
        Command::Distribution(a) => commands::distribution(rc, a),
        Command::Sensitivity(a) => commands::sensitivity(rc, a),
        Command::Verify(a) => verify::verify(rc, a),
        Command::Wigner(a) => commands::wigner(rc, a),
        Command::Pacs(a) => commands::pacs(rc, a),
        Command::Baselines(a) => commands::baselines(rc, a),
        Command::Reck(a) => commands::reck(rc, a),
        Command::Embed(a) => commands::embed(rc, a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
