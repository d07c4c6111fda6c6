//! `echolab`: forward solvers, finite-difference checks and peak inversion
//! for 1-D waves in layered media.

mod commands;
mod manifest;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

pub use commands::{InvertArgs, MeasureArgs, SimulateArgs, VerifyArgs};

#[derive(Debug, Parser)]
#[command(name = "echolab", version, about = "Echoes of 1-D waves from layered media")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the field u(x, t) on a grid and write `x,t,W` rows.
    Simulate(SimulateArgs),
    /// Synthesize the detector record m(t).
    Measure(MeasureArgs),
    /// Reconstruct the medium from peak times and heights.
    Invert(InvertArgs),
    /// Compare the analytic detector trace with a finite-difference run.
    Verify(VerifyArgs),
}

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    /// Infeasible or ambiguous reconstruction.
    pub const NO_UNIQUE_MEDIUM: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const NUMERICAL: u8 = 3;
}

/// Failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: exit::INPUT,
            message: message.into(),
        }
    }
}

impl From<echolab_core::Error> for CliError {
    fn from(e: echolab_core::Error) -> Self {
        let code = match e {
            echolab_core::Error::Infeasible(_) => exit::NO_UNIQUE_MEDIUM,
            ref e if e.is_input_error() => exit::INPUT,
            _ => exit::NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("ECHOLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::input(format!("ECHOLAB_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::input(format!("cannot configure threads: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Simulate(args) => commands::simulate(&args),
        Command::Measure(args) => commands::measure(&args),
        Command::Invert(args) => commands::invert(&args),
        Command::Verify(args) => commands::verify(&args),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("echolab: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
