//! Error type shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, AlgflowError>;

#[derive(Debug, Error)]
pub enum AlgflowError {
    /// Two operands (or an operand and an index) disagree on dimension.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An index is outside `0..dim`.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// A parameter violates its documented range or shape.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A weight vector is not a probability distribution.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A middle-index operation table fails the associativity check.
    #[error("operation table is not associative at ({i}, {j}, {k})")]
    NonAssociativeOp { i: usize, j: usize, k: usize },

    /// A matrix fails a stochasticity precondition.
    #[error("matrix is not stochastic: {0}")]
    NotStochastic(String),

    /// A time argument violates the ordering or gap constraints of a flow.
    #[error("time domain violation: {0}")]
    TimeDomain(String),

    /// A scalar function descriptor could not be evaluated.
    #[error("descriptor evaluation failed: {0}")]
    Descriptor(String),

    /// A matrix family is singular (or numerically too ill-conditioned) at a time.
    #[error("singular matrix family: {0}")]
    SingularFamily(String),

    /// A process-only operation was invoked on a flow without process structure.
    #[error("flow does not declare quadratic-process structure")]
    NotQsp,

    /// A run configuration could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
