//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by the statistical kernels.
///
/// Every precondition violation maps to [`Error::Domain`] with a message
/// naming the offending argument; configuration problems in the Monte Carlo
/// layer map to [`Error::InvalidConfig`].
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An experiment configuration failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
