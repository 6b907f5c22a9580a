use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KzpError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus {0} is too large (must be below 2^31)")]
    ModulusTooLarge(u64),
    #[error("variable layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("exponent overflow in variable {var} (limit {limit})")]
    ExponentOverflow { var: usize, limit: u32 },
    #[error("too many variables: {0} (limit {1})")]
    TooManyVariables(usize, usize),
    #[error("expected {expected} indices, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("exceptional prime p={p}: {reason}")]
    ExceptionalPrime { p: u64, reason: String },
    #[error("degenerate evaluation point: {0}")]
    DegeneratePoint(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("term budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, KzpError>;
