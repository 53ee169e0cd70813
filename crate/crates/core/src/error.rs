use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("work limit exceeded: {0}")]
    WorkLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
