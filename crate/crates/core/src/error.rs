use crate::extrange::RangeError;

/// Errors raised anywhere in the solver stack.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Argument outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed user-supplied configuration or data.
    #[error("invalid input: {0}")]
    Input(String),
    /// A segment was evaluated where `a + b·x` has the wrong sign for its regime.
    #[error("regime mismatch: {0}")]
    Regime(String),
    /// The linear system for the scattering amplitudes is singular.
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Range(#[from] RangeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
