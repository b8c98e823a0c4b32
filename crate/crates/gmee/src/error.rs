//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("window holds {got} samples, need at least {need}")]
    InsufficientWindow { need: usize, got: usize },

    #[error("codebook counts sum to {codebook_total} but the error list has {errors} samples")]
    CodebookMismatch { codebook_total: usize, errors: usize },

    #[error("insufficient Monte-Carlo samples: {got} < {min}")]
    InsufficientSamples { min: usize, got: usize },

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("signal length mismatch: {0}")]
    SignalLength(String),

    #[error("unsupported WAV format: {0}")]
    WavFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
