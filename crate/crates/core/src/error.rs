use thiserror::Error;

/// Errors raised by scheme construction, verification, search, and decoding.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MintsError {
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("scheme is not feasible: subsets {0} and {1} are indistinguishable")]
    InfeasibleScheme(String, String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

pub type Result<T, E = MintsError> = std::result::Result<T, E>;

impl MintsError {
    pub(crate) fn overflow(what: impl Into<String>) -> Self {
        MintsError::Overflow(what.into())
    }
}
