use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("degree must be at least {min}, got {n}")]
    DegenerateDegree { n: usize, min: usize },

    #[error("not a permutation: duplicated image {0}")]
    DuplicateImage(usize),

    #[error("not a permutation: image {value} out of range 1..={n}")]
    ImageOutOfRange { value: usize, n: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
