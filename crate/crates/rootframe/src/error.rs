use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid weight at index {index}: {value} (weights must be finite and positive)")]
    InvalidWeight { index: usize, value: f64 },

    #[error(
        "degenerate separating functional: root {index} has |<alpha, beta>| = {inner:.3e} <= {eps:.3e}"
    )]
    DegenerateFunctional { index: usize, inner: f64, eps: f64 },

    #[error("no non-degenerate separating functional found after {attempts} seeded draws")]
    RetryExhausted { attempts: usize },

    #[error("index {index} out of range for a frame of {len} vectors")]
    IndexOutOfRange { index: usize, len: usize },

    #[error(
        "not a frame: smallest frame-operator eigenvalue {lambda_min:.3e} is below the frame floor"
    )]
    NotAFrame { lambda_min: f64 },

    #[error(
        "not an eigenframe: worst per-vector eigen-residual {worst_residual:.3e} exceeds {tolerance:.1e}"
    )]
    NotAnEigenframe { worst_residual: f64, tolerance: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unsupported format version {found} (this build reads version {expected})")]
    Version { found: u32, expected: u32 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
