use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("bad reduction: {0}")]
    BadReduction(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("variety violates a standing hypothesis: {0}")]
    InvalidVariety(String),
    #[error("point sampling exhausted: found {found} of {wanted} points in {trials} trials")]
    SamplingExhausted { found: usize, wanted: usize, trials: usize },
    #[error("{0}")]
    Empty(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("singular group element")]
    Singular,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
