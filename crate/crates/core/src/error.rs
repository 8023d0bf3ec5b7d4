use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point, cube or parameter lies outside its valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The session's round limit has been consumed.
    #[error("round limit of {limit} exceeded")]
    RoundLimitExceeded { limit: usize },

    /// Charging the batch would overrun the query budget; nothing was revealed.
    #[error("query budget of {budget} exceeded: {spent} spent, batch needs {requested}")]
    QueryBudgetExceeded { budget: u64, spent: u64, requested: u64 },

    /// Instance parameters degenerate or too large to represent.
    #[error("invalid parameters: {0}")]
    Parameter(String),

    /// An exhaustive computation would exceed its tiny-scale guard.
    #[error("scale guard exceeded: {what} needs {needed}, limit {limit}")]
    ScaleGuard { what: &'static str, needed: u128, limit: u128 },

    /// No sub-cube carried odd boundary parity; the field is not a valid
    /// bounded direction-preserving padded instance.
    #[error("no sub-cube with odd bad-face parity in round {round}")]
    NoOddSubcube { round: usize },

    /// Malformed instance file or CSV input.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
