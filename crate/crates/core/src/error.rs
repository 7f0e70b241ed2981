//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument below the branch point of the principal Lambert W branch.
    #[error("lambert_w0: argument {0} is below -1/e")]
    LambertDomain(f64),

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("lambda must be > 0, got {0}")]
    NonPositiveLambda(f64),

    #[error("EMA momentum must lie strictly inside (0, 1), got {0}")]
    InvalidMomentum(f64),

    #[error("batch of losses is empty")]
    EmptyBatch,

    #[error("{context}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        got: usize,
    },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {message}")]
    Jsonl {
        path: String,
        line: usize,
        message: String,
    },

    #[error("training diverged: mean task loss {0} exceeds 1e6")]
    Diverged(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dim(context: impl Into<String>, expected: usize, got: usize) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
            expected,
            got,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
