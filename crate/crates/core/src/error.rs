use thiserror::Error;

/// Errors raised by the engine.
///
/// `Validation` covers malformed or out-of-contract input; `Invariant` means an
/// integrality or consistency check inside the engine failed, which indicates a
/// bug rather than bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("surface mismatch: {0} vs {1}")]
    SurfaceMismatch(String, String),
    #[error("parity error: {0}")]
    Parity(String),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("invariant breach: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for internal invariant breaches (CLI exit code 2).
    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
