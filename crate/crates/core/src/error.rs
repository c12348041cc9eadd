use thiserror::Error;

/// Errors raised by ring construction and the algebraic operations built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("descriptor mismatch: expected {expected}, found {found}")]
    DescriptorMismatch { expected: String, found: String },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("endomorphism of order {order} does not satisfy sigma^{t} = 1")]
    SigmaOrderMismatch { order: usize, t: usize },

    #[error("scalar action undefined: {0}")]
    ScalarActionUndefined(String),

    #[error("operation requires a commutative ring, got {0}")]
    NotCommutative(String),

    #[error("standard polynomial of degree {degree} exceeds the factorial budget (max degree {max_degree})")]
    BudgetExceeded { degree: usize, max_degree: usize },

    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),

    #[error("matrix is not in the image of the embedding")]
    NotInImage,
}

pub type Result<T> = std::result::Result<T, AlgError>;
