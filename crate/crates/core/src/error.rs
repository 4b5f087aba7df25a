use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("map is not regular on the given nodes: rank {rank} < {k}")]
    NotRegularOnNodes { rank: usize, k: usize },
    #[error("quotient algebra is not finite-dimensional: {0}")]
    NotFinite(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
