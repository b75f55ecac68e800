use thiserror::Error;

use crate::walks::Refutation;

/// Errors produced by the grid, walk, covering and search operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("walk is not realizable: {0}")]
    Unrealizable(Refutation),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
