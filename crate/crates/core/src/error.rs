use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("configuration text is empty")]
    EmptyText,
    #[error("invalid character {found:?} at position {position}")]
    InvalidCharacter { found: char, position: usize },
    #[error("copy count must be at least 1")]
    ZeroCopies,
    #[error("radius must be at least 1")]
    InvalidRadius,
    #[error("no cycle of period at most 2 detected within {0} steps")]
    StepBudgetExceeded(usize),
    #[error("brute force over 2^{n} configurations exceeds the budget of 2^{max_bits}")]
    EnumerationBudgetExceeded { n: usize, max_bits: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("configuration is not temporally periodic")]
    NotTemporallyPeriodic,
    #[error("configuration is homogeneous")]
    HomogeneousConfiguration,
    #[error("ring sizes differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("structural invariant violated: {0}")]
    InvariantViolated(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::PreconditionViolated(msg.into())
    }
}
