use thiserror::Error;

/// Failure classes shared by every module.
///
/// `Usage` means the caller asked for something malformed (bad index sets,
/// out-of-range parameters). `Domain` means the input is well-formed but
/// outside the mathematical domain of the operation (non-positive-definite
/// matrix, mixed state where a pure one is required). `Internal` flags a
/// broken postcondition and should never surface for valid inputs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SteerError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl SteerError {
    /// The message without its class prefix.
    pub fn message(&self) -> &str {
        match self {
            SteerError::Usage(m)
            | SteerError::Domain(m)
            | SteerError::Degenerate(m)
            | SteerError::Internal(m) => m,
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        SteerError::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SteerError::Domain(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        SteerError::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, SteerError>;
