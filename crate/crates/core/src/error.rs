use thiserror::Error;

/// Everything the library can refuse to do.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be odd and positive, got {0}")]
    BadModulus(i128),
    #[error("zero has no odd part")]
    Zero,
    #[error("{value} is outside the sieve range (limit {limit})")]
    OutOfRange { value: u128, limit: u64 },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("quadric coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("malformed quadric: {0}")]
    Malformed(String),
    #[error("oracle depth {depth} exceeds the maximum {max} for this place")]
    DepthTooLarge { depth: u32, max: u32 },
    #[error("invalid base point: {0}")]
    InvalidBasePoint(String),
    #[error("bound {bound} exceeds the configured ceiling {ceiling}")]
    CeilingExceeded { bound: u64, ceiling: u64 },
    #[error("inadmissible input: {0}")]
    Inadmissible(String),
    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
