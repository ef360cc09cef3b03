//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An edge-probability kernel produced a value outside [0, 1].
    #[error("kernel {kernel} produced {value} outside [0, 1]")]
    KernelRange { kernel: String, value: f64 },

    /// Exhaustive enumeration refused: the search space 2^(n-1) is too large.
    #[error("n = {n} exceeds the exhaustive-search cap of {max}")]
    ResourceLimit { n: usize, max: usize },

    #[error("LAPACK {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    /// Closed-form moments exist only for the squared-exponential kernel.
    #[error("no closed-form moments for kernel {0}; use the Monte-Carlo estimator")]
    NoClosedForm(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
