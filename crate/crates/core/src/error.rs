use thiserror::Error;

/// Errors raised by the capacity library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probabilities sum to {sum}, expected 1")]
    NonNormalized { sum: f64 },
    #[error("negative probability {0}")]
    NegativeProbability(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not a valid density operator: {0}")]
    NotAState(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("Bloch radius is zero; encoding probability is undefined")]
    DegenerateRadius,
    #[error("no feasible point found after {evaluations} evaluations")]
    InfeasibleProblem { evaluations: usize },
    #[error("objective evaluation failed: {0}")]
    Evaluation(String),
    #[error("grid of {points} points exceeds the limit of {limit}")]
    ResolutionTooLarge { points: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
