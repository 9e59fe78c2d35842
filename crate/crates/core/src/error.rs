use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: {0} vs {1} variables")]
    ArityMismatch(usize, usize),
    #[error("modulus {0} is not a prime below 2^31")]
    NonPrimeModulus(u64),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("ring is not artinian: {0}")]
    NotArtinian(String),
    #[error("ring is not graded: {0}")]
    NotGraded(String),
    #[error("degree {0} lies beyond the computation horizon of a non-artinian ring")]
    HorizonExceeded(usize),
    #[error("element is not a cycle: {0}")]
    NotACycle(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown corpus ring `{0}`")]
    UnknownRing(String),
}

pub type Result<T> = std::result::Result<T, Error>;
