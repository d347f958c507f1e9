use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the evaluators and verification suites.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series diverges: {0}")]
    Divergence(String),

    /// An L-factor evaluated at (or within 1e-12 of) one of its poles.
    #[error("pole of factor (1 - ({gamma}) * q^(-{degree} s))^-1")]
    Pole { gamma: Complex64, degree: u32 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("input rejected: {0}")]
    RejectedInput(String),

    #[error("element is not regular semisimple")]
    NonRegular,

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
