use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("element is not invertible: real part is zero")]
    NonInvertible,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal construction error: {0}")]
    Construction(String),
    #[error("bilinear form is degenerate")]
    Degenerate,
    #[error("bilinear form is not admissible: {0}")]
    NotAdmissible(String),
    #[error("parity error: {0}")]
    Parity(String),
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("flows and Lie derivatives require an even vector field")]
    OddVectorField,
    #[error("orientation error: {0}")]
    Orientation(String),
    #[error("symmetry violation: {0}")]
    Symmetry(String),
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: 0,
            column: 0,
            message: message.into(),
        }
    }
}
