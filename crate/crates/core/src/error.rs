use num_bigint::BigUint;

/// Errors shared by every module of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or inconsistent input (bad symbol, mismatched parameters, non-prime modulus).
    #[error("invalid input: {0}")]
    Input(String),
    /// A value left its admissible range, e.g. an unshifted tuple with a negative entry.
    #[error("out of range: {0}")]
    Range(String),
    /// An enumeration would exceed the configured budget. Never truncated silently.
    #[error("refused: enumeration needs {required} steps, budget is {budget}")]
    Budget { required: BigUint, budget: u64 },
    /// An operation was called outside its precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
