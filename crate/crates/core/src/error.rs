use thiserror::Error;

/// Errors raised by the solver and its IO layer.
#[derive(Debug, Error)]
pub enum Error {
    /// A state or argument lies outside the domain of an operation
    /// (e.g. a conversion requested for an inadmissible state).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid run or problem configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A structural guarantee of the scheme was violated at runtime.
    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
