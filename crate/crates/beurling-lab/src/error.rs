use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point {0} is not in the open domain")]
    NotInterior(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("{what} did not converge (last error estimate {estimate:.3e})")]
    NonConvergence { what: String, estimate: f64 },
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
