use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} variables against {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("characteristic mismatch")]
    CharMismatch,
    #[error("the graded degree of the zero polynomial is undefined")]
    ZeroDegree,
    #[error("a coefficient denominator is divisible by the prime {prime}; retry with another prime")]
    DenominatorNotInvertible { prime: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("homotopy is nonzero on the unit, perturbation would break unitality")]
    UnitalityViolation,
    #[error("graph contains a directed cycle of length >= {0}")]
    CyclicGraph(usize),
    #[error("graph has a self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("unsupported block layout: {0}")]
    UnsupportedLayout(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("lifting hypothesis fails: {0}")]
    HypothesisFailure(String),
    #[error("lifting system leaves the truncation range (degree {0} exceeds max_degree)")]
    TruncationTooSmall(i64),
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
