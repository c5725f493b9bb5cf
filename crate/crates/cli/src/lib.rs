//! Command-line scenario runner. Every subcommand writes CSV (or a short
//! `key=value` report) to stdout or to the configured output file.

mod commands;
mod config;
mod csv;
mod error;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::CircuitTarget;
pub use config::ScenarioConfig;
pub use csv::fmt_num;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qauction",
    version,
    about = "Simulate adiabatic quantum auctions, attacks and defenses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file of `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Override one key, e.g. `--set steps=40`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Write to this file instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Success probability and leakage per step.
    Converge(Common),
    /// Exact, zeroth- and first-order success curves on one schedule.
    Variants(Common),
    /// Instantaneous spectrum and minimum gap.
    Gap(Common),
    /// Learning curves, or the spurious-Hamiltonian run with `attack=spurious`.
    Attack(Common),
    /// Minimum-error measurement for `povm_states`.
    Povm(Common),
    /// Compare a circuit file with a protocol unitary.
    CircuitVerify {
        circuit: PathBuf,
        /// bidder:<bits>, D:<delta>,<f>, P:<delta>,<f> or collusion:<bits>,<bits>
        #[arg(long)]
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the generated circuit for a target.
    CircuitEmit {
        #[arg(long)]
        target: String,
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common) -> Result<ScenarioConfig, CliError> {
    let text = match &common.config {
        Some(p) => Some(
            std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    ScenarioConfig::load(text.as_deref(), &common.overrides)
}

fn emit(common: &Common, cfg: &ScenarioConfig, text: &str) -> Result<(), CliError> {
    match common.output.as_ref().or(cfg.output.as_ref()) {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

type Body = fn(&ScenarioConfig) -> Result<String, CliError>;

/// Runs one parsed command. Output is written only once the command succeeded.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let (common, body): (&Common, Body) = match &cli.command {
        Command::Converge(c) => (c, commands::converge),
        Command::Variants(c) => (c, commands::variants),
        Command::Gap(c) => (c, commands::gap),
        Command::Attack(c) => (c, commands::attack),
        Command::Povm(c) => (c, commands::povm),
        Command::CircuitVerify {
            circuit,
            target,
            common,
        } => {
            let cfg = load(common)?;
            let text = std::fs::read_to_string(circuit)
                .map_err(|e| CliError::Io(format!("{}: {e}", circuit.display())))?;
            return match commands::circuit_verify(&cfg, &text, target) {
                Ok(report) => emit(common, &cfg, &report),
                Err(CliError::VerificationFailed {
                    distance,
                    tolerance,
                    report,
                }) => {
                    emit(common, &cfg, &report)?;
                    Err(CliError::VerificationFailed {
                        distance,
                        tolerance,
                        report,
                    })
                }
                Err(e) => Err(e),
            };
        }
        Command::CircuitEmit { target, common } => {
            let cfg = load(common)?;
            let text = commands::circuit_emit(&cfg, target)?;
            return emit(common, &cfg, &text);
        }
    };
    let cfg = load(common)?;
    let text = body(&cfg)?;
    emit(common, &cfg, &text)
}
