use thiserror::Error;

/// Library error type.
///
/// `InvalidInput` covers malformed user-facing data (bad indices, parse
/// failures, mismatched shapes). `ContractViolation` flags a call that breaks
/// a documented precondition of an operation (wrong variant, wrong degree,
/// weights from different orbits).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }
}
