use thiserror::Error;

/// Errors raised when an operation's preconditions are not met.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("POVM elements do not sum to identity (max deviation {deviation:.3e})")]
    IncompletePovm { deviation: f64 },

    #[error(
        "POVM element {index} is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})"
    )]
    NotPositive { index: usize, min_eigenvalue: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("bid must contain at least one set bit")]
    ZeroBid,

    #[error("invalid bid string {0:?}")]
    InvalidBid(String),

    #[error("payoff tie: allocations {first} and {second} both pay {payoff}")]
    Tie {
        first: usize,
        second: usize,
        payoff: f64,
    },

    #[error("malformed gate: {0}")]
    MalformedGate(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
