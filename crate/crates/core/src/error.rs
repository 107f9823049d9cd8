use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A valuation comparison cannot be decided at the current precision.
    #[error("valuation indeterminate at current precision ({0})")]
    IndeterminateValuation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("sublattice does not split off: {0}")]
    Split(String),
    #[error("map is not an approximate isometry: {0}")]
    NotApproximatelyIsometric(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    /// Operands come from different rings or value groups.
    #[error("configuration mismatch: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn indeterminate(what: impl Into<String>) -> Error {
    Error::IndeterminateValuation(what.into())
}

pub(crate) fn domain(what: impl Into<String>) -> Error {
    Error::Domain(what.into())
}
