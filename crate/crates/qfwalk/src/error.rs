use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QfError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid symplectic triple: {0}")]
    InvalidTriple(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("density matrix is not faithful (smallest eigenvalue {0:e})")]
    NotFaithful(f64),
    #[error("eigenvalue clustering failed: {0}")]
    Clustering(String),
    #[error("off-diagonality violated in eigenspace {alpha}: residual {residual:e}")]
    Hypothesis { alpha: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, QfError>;

pub(crate) fn invalid(msg: impl Into<String>) -> QfError {
    QfError::InvalidInput(msg.into())
}
