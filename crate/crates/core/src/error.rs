use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid type {0:?}")]
    InvalidType(String),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("malformed word {0:?}")]
    MalformedWord(String),
    #[error("word {0:?} repeats a letter and is not toric")]
    NotToric(Vec<usize>),
    #[error("words are over different Cartan data")]
    DatumMismatch,
    #[error("permutation is not a diagram automorphism")]
    NotAutomorphism,
    #[error("vertex {0} is not in the digraph")]
    VertexAbsent(usize),
    #[error("digraph has {n} vertices, canonical form bound is {bound}")]
    SizeBound { n: usize, bound: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("fan map fails on collection {0}")]
    FanIsoFailed(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("square-zero search bound {0} is too small to certify (need at least 2)")]
    BoundTooSmall(i64),
    #[error("eigen multiplicities sum to {total}, expected {rank}")]
    MultiplicityTotal { total: usize, rank: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("recovery failed in {step}: {detail}")]
    Recovery { step: String, detail: String },
}

impl Error {
    pub(crate) fn recovery(step: &str, detail: impl Into<String>) -> Self {
        Error::Recovery {
            step: step.to_string(),
            detail: detail.into(),
        }
    }
}
