use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("partition entries must be positive, got {0}")]
    InvalidEntry(String),
    #[error("partition has no entries")]
    EmptyPartition,
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("scalar multiplier must be positive, got {0}")]
    InvalidScalar(String),
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("entry {0} is not a power of the base")]
    NotPowerOfBase(String),
    #[error("base mismatch: {0} vs {1}")]
    BaseMismatch(u64, u64),
    #[error("arithmetic overflow in the entry type")]
    Overflow,
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("precondition violated: {0}")]
    ContractViolation(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
