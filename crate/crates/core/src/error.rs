use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Two endpoints could not be ordered before the refinement cap.
    #[error("endpoint refinement budget exhausted at 2^-{bits}")]
    RefinementBudget { bits: u32 },
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("polynomial is not primitive (content {0})")]
    NotPrimitive(String),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("threshold cannot be cleared to a polynomial comparison: {0}")]
    IncomparableThreshold(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("height {0} is outside the table domain of psi")]
    OutsideTable(u64),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
