use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("zero pattern leaves {0} with no free cell")]
    InfeasiblePattern(String),
    #[error("brute-force oracle handles at most 4x4, got {x_len}x{y_len}")]
    ScaleExceeded { x_len: usize, y_len: usize },
    #[error("perturbation makes A[{row}][{col}] negative")]
    StochasticityViolated { row: usize, col: usize },
    #[error("invalid instance: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Core(#[from] condcompat::Error),
}
