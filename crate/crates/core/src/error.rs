use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("evaluation point has a zero coordinate at index {0}")]
    ZeroCoordinate(usize),

    #[error("variable map is not a bijection")]
    NonBijective,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("recurrence is singular at m = {m}: leading coefficient vanishes and no seed was supplied")]
    SingularRecurrence { m: usize },

    #[error("no operator found with order <= {max_order} and degree <= {max_degree}")]
    NoOperatorFound { max_order: usize, max_degree: usize },

    #[error("not enough terms: need {needed}, have {available}")]
    InsufficientTerms { needed: usize, available: usize },

    #[error("operator does not have a maximally unipotent point at t = 0")]
    NotMum,

    #[error("sign convention unsupported: {0}")]
    UnsupportedSign(String),

    #[error("sequence does not converge: {0}")]
    NoConvergence(String),

    #[error("interpolation failed: {0}")]
    Interpolation(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(e.to_string())
    }
}
