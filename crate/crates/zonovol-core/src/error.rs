//! Error type shared by all zonovol operations.

use thiserror::Error;

/// Errors raised by geometric and numeric operations.
///
/// Variants map onto the CLI exit codes: parse failures exit 1,
/// applicability violations exit 2, budget overruns exit 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate body: {0}")]
    Degenerate(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("not applicable: {0}")]
    Applicability(String),

    #[error("exact evaluation impossible, needs Monte Carlo: {0}")]
    NeedsMonteCarlo(String),

    #[error("numerical inconsistency: {0}")]
    Numerical(String),

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 1,
            Error::DimensionMismatch { .. }
            | Error::Degenerate(_)
            | Error::Applicability(_)
            | Error::NeedsMonteCarlo(_) => 2,
            Error::Budget(_) => 3,
            Error::Numerical(_) | Error::NonConvergence(_) => 70,
        }
    }
}
