use thiserror::Error;

/// Failures raised by the norm and harness operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("reference norm needs equal exponents, got {p0} and {p1}")]
    UnequalExponents { p0: String, p1: String },

    #[error("theta must lie strictly between 0 and 1, got {0}")]
    ThetaOutOfRange(f64),

    #[error("r must be positive, got {0}")]
    NonPositiveR(f64),

    #[error("{support} active terms exceed the enumeration cap of {cap}")]
    EnumerationCap { support: usize, cap: usize },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bound violated: {0}")]
    BoundViolated(String),
}

impl Error {
    /// True for errors caused by an input outside an operation's domain
    /// (as opposed to a violated certified inequality).
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::BoundViolated(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
