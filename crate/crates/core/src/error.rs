use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{a} is not invertible modulo {m}")]
    NotCoprime { a: i64, m: u64 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("template mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("node budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("anti-van der Waerden number undefined: {0} contains no {1}-term progression")]
    UndefinedAw(String, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
