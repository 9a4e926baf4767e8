use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in GF({p})")]
    DivisionByZero { p: u8 },

    #[error("unsupported modulus {0}: expected a prime in 2..=251")]
    InvalidModulus(u32),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subspace is not contained in the ambient subspace")]
    NotContained,

    #[error("vector is not a member of the subspace")]
    NotInSubspace,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("degenerate quotient: the result would be 0-dimensional")]
    DegenerateQuotient,

    #[error("matrix is singular")]
    Singular,

    #[error("multi-index bounds differ")]
    BoundsMismatch,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("Jacobi identity fails on {count} basis triple(s), first ({i}, {j}, {k})")]
    JacobiViolation { count: usize, i: usize, j: usize, k: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
