//! Error type shared across the library.

use thiserror::Error;

/// Errors surfaced by library operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Invalid argument: bad dimensions, malformed graphs, unknown tags.
    #[error("input error: {0}")]
    Input(String),
    /// Problem size exceeds a dense-representation limit.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// Non-finite values or numeric breakdown during computation.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
