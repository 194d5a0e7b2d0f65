//! Command-line front end.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{Command, Outcome, EXIT_CONFIG, EXIT_MISMATCH, EXIT_NONCONVERGENCE, EXIT_OK};
pub use config::{ConfigError, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "susyhier",
    version,
    about = "Hierarchy spectra with a finite-difference check"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Closed-form energies as CSV.
    Spectrum(CommonArgs),
    /// Compare closed-form levels with the discretized operator.
    Verify(CommonArgs),
    /// Reality sweep over a two-parameter lattice.
    Scan(CommonArgs),
    /// Sampled ground state as CSV.
    Wavefunction(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Run configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `mode` from the configuration.
    #[arg(long, value_parser = ["paper-literal", "self-consistent"])]
    pub mode: Option<String>,
}

impl CliCommand {
    pub fn split(&self) -> (Command, &CommonArgs) {
        match self {
            CliCommand::Spectrum(a) => (Command::Spectrum, a),
            CliCommand::Verify(a) => (Command::Verify, a),
            CliCommand::Scan(a) => (Command::Scan, a),
            CliCommand::Wavefunction(a) => (Command::Wavefunction, a),
        }
    }
}

/// Loads the configuration, runs the command and writes `--out` when given.
/// Printing to stdout is left to the caller.
pub fn execute(cli: &Cli) -> Outcome {
    let (command, args) = cli.command.split();
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            return Outcome::failure(
                EXIT_CONFIG,
                format!("error: cannot read {}: {e}", args.config.display()),
            )
        }
    };
    let mut config = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => return Outcome::failure(EXIT_CONFIG, format!("error: {e}")),
    };
    if let Some(mode) = args.mode.as_deref().and_then(config::parse_mode) {
        config.run.mode = mode;
    }
    let mut outcome = commands::run(command, &config);
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &outcome.output) {
            return Outcome::failure(
                EXIT_CONFIG,
                format!("error: cannot write {}: {e}", path.display()),
            );
        }
        outcome.output.clear();
    }
    outcome
}
