use thiserror::Error;

/// Everything that can go wrong while building or combining diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("odd boundary: {0} points cannot be perfectly matched")]
    OddBoundary(usize),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("strand mismatch: {left} strands meet {right} strands")]
    StrandMismatch { left: usize, right: usize },
    #[error("loop parameter must be a rational strictly greater than 2, got {0}")]
    BadLoopParameter(String),
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("not an endomorphism: {from} -> {to}")]
    NotEndomorphism { from: usize, to: usize },
    #[error("wrong shape: expected {expected}, found {found}")]
    Shape { expected: String, found: String },
    #[error("gram matrix is not positive definite at level {0}")]
    GramNotPositive(usize),
    #[error("moment computation needs {needed} bottom strings, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("moment order {0} is not a positive power of two")]
    MomentOrder(usize),
    #[error("basis check failed: {0}")]
    BasisCheck(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
