use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("bad field: {0}")]
    BadField(String),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("invalid algorithm: {0}")]
    InvalidAlgorithm(String),
    #[error("bad transform: {0}")]
    BadTransform(String),
    #[error("matrix is singular")]
    SingularMatrix,
    /// A leading principal block vanished although the whole matrix is invertible.
    #[error("zero pivot in leading {size}x{size} block (no pivoting is performed)")]
    PivotFailure { size: usize },
    #[error("coefficient {0} is not representable in the target ring")]
    Coefficient(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
