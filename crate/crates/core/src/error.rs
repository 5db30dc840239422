use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("scan exceeded its budget of {limit} steps")]
    BudgetExceeded { limit: u64 },
    #[error("scan interrupted after {steps} steps")]
    Interrupted { steps: u64 },
    #[error("could not factor {0} within the iteration cap")]
    FactorizationFailed(String),
    #[error("digit vectors have different bases ({0} and {1})")]
    BaseMismatch(u32, u32),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::Interrupted { .. })
    }
}

/// A multi-step computation that stopped early, carrying what it finished.
#[derive(Debug, Clone)]
pub struct Incomplete<T> {
    pub partial: T,
    pub cause: Error,
}

impl<T> std::fmt::Display for Incomplete<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "incomplete result: {}", self.cause)
    }
}

impl<T: std::fmt::Debug> std::error::Error for Incomplete<T> {}
