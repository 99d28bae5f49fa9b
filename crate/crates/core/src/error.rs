use thiserror::Error;

/// Errors raised by the algebra, geometry and pipeline layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
    /// A caller-side contract was violated (e.g. a unique solution was
    /// requested from a system of positive dimension).
    #[error("contract error: {0}")]
    Contract(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Internal bookkeeping disagreed with itself.
    #[error("consistency error: {0}")]
    Consistency(String),
    /// The hypotheses of a criterion do not hold for the given input.
    #[error("criterion not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
