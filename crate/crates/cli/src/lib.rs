//! `qf`: JSON state documents in, reports, JSON and CSV out.
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 domain violation.

pub mod commands;
pub mod document;
pub mod error;
pub mod scan;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qf", version, about = "Quasifree state analysis")]
pub struct Cli {
    /// Tolerance for document validation and numerical checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorArg {
    First,
    Second,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symplectic spectrum, purity and validity of a document.
    Validate { path: PathBuf },
    /// Transition probability between two states.
    Fidelity {
        a: PathBuf,
        b: PathBuf,
        /// Also integrate the characteristic functions numerically (n ≤ 2).
        #[arg(long)]
        quadrature: bool,
        /// Report the Gaussian overlap when both states are mixed.
        #[arg(long)]
        overlap: bool,
    },
    /// Purification on the doubled phase space (doubled document).
    Purify { path: PathBuf },
    /// Fidelity between the purification and the uncorrelated product.
    Entanglement { path: PathBuf },
    /// Marginal on a subset of modes.
    Reduce {
        path: PathBuf,
        /// Zero-based modes to keep, comma separated (standard documents).
        #[arg(long, value_delimiter = ',')]
        keep: Vec<usize>,
        /// Factor to keep (doubled documents).
        #[arg(long, value_enum)]
        factor: Option<FactorArg>,
    },
    /// Williamson and BDI factors as JSON.
    Decompose { path: PathBuf },
    /// Half-plane point of a one-mode pure state, and distances to a second.
    Halfplane { a: PathBuf, b: Option<PathBuf> },
    /// Fock-space oracle agreement suite as CSV.
    OracleCheck,
    /// Evaluate a templated document over a parameter range, CSV out.
    Scan {
        template: PathBuf,
        /// Name of the scalar placeholder.
        #[arg(long)]
        param: String,
        /// start:end:count
        #[arg(long)]
        range: String,
        /// Reference state for the fidelity column (default: vacuum).
        #[arg(long)]
        against: Option<PathBuf>,
    },
}

/// Result of a command: text for the chosen sink and whether the command
/// reached a negative verdict (exit 2) while still producing output.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Self {
            text,
            failed: false,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let tol = cli.tol;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(CliError::Parse(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    match &cli.command {
        Command::Validate { path } => commands::validate(path, tol),
        Command::Fidelity {
            a,
            b,
            quadrature,
            overlap,
        } => commands::fidelity(a, b, *quadrature, *overlap, tol),
        Command::Purify { path } => commands::purify(path, tol),
        Command::Entanglement { path } => commands::entanglement(path, tol),
        Command::Reduce { path, keep, factor } => commands::reduce(path, keep, *factor, tol),
        Command::Decompose { path } => commands::decompose(path, tol),
        Command::Halfplane { a, b } => commands::halfplane(a, b.as_deref(), tol),
        Command::OracleCheck => commands::oracle_check(),
        Command::Scan {
            template,
            param,
            range,
            against,
        } => commands::scan(template, param, range, against.as_deref(), tol),
    }
}

/// Writes `outcome` to `--out` or stdout.
pub fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, &outcome.text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    }
}
