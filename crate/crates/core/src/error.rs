use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("n = {n} is not prime; {what} needs a prime modulus")]
    NotPrime { n: u32, what: &'static str },

    #[error("n = {n} exceeds the configured bound {bound}")]
    BoundExceeded { n: u32, bound: u32 },

    #[error("determinant {det} is not invertible mod {n}")]
    NotInvertible { det: u64, n: u32 },

    #[error("matrix has determinant {det} mod {n}, expected {expected}")]
    WrongDeterminant {
        det: u64,
        n: u32,
        expected: &'static str,
    },

    #[error("lift is not in the normalizer: {0}")]
    NotInNormalizer(String),

    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
