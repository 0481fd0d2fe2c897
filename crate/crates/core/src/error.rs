use thiserror::Error;

/// Errors raised by evaluation, verification and search routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("bracket error: {0}")]
    Bracket(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("unknown bound id `{0}`")]
    UnknownBound(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn bracket(msg: impl Into<String>) -> Self {
        Error::Bracket(msg.into())
    }
}
