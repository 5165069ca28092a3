use thiserror::Error;

/// Errors raised by the counting and lattice routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An interval longer than the modulus was paired with a polynomial.
    #[error("interval length {len} exceeds modulus {modulus}")]
    IntervalTooLong { len: u64, modulus: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested computation would exceed the configured work budget.
    #[error("cost guard: {what} needs {needed} units, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("unsupported size: {0}")]
    Unsupported(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
