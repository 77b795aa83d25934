use thiserror::Error;

/// Errors surfaced by the exact-arithmetic stack.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    ZeroPolynomialDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero divisor: defining polynomial reducible (common factor {factor})")]
    ZeroDivisor { factor: String },
    #[error("coefficient shape violation: {0}")]
    ShapeViolation(String),
    #[error("no unique positive real root: {0}")]
    NoUniquePositiveRoot(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{m} is a perfect {power}th power; its {n}th root has lower degree")]
    PerfectPower { m: u64, n: u32, power: u32 },
    #[error("coefficient size {bits} bits exceeds limit {limit}")]
    ResourceLimit { bits: u64, limit: u64 },
    #[error("i/o: {0}")]
    Io(String),
    #[error("expansion is not periodic")]
    NotPeriodic,
}

pub type Result<T> = std::result::Result<T, Error>;
