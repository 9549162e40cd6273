use thiserror::Error;

/// Errors raised by the library. Positions in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed scalar literal {0:?}")]
    MalformedScalar(String),
    #[error("zero denominator in literal {0:?}")]
    ZeroDenominator(String),
    #[error("attempt to invert zero")]
    ZeroInverse,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field specification {0:?}")]
    InvalidField(String),
    #[error("float tolerance must be finite and non-negative, got {0}")]
    InvalidTolerance(f64),

    #[error("matrix order {0} is not even")]
    OddOrder(usize),
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("dimension mismatch: expected order {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("generator E requires distinct indices, got ({0}, {0})")]
    DiagonalTransvection(usize),
    #[error("generator with zero multiplier is the identity and is not constructed")]
    ZeroMultiplier,

    #[error("input matrix is not symplectic")]
    NotSymplectic,
    #[error("input matrix is singular")]
    Singular,
    #[error("diagonal factor has a zero entry at position {0}")]
    ZeroDiagonalEntry(usize),
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("elimination invariant violated in cycle {cycle}: {detail}")]
    Defect { cycle: usize, detail: String },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
