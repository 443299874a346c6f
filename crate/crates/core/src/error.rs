use thiserror::Error;

/// Errors raised by the numeric routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{name} = {value} is out of range ({range})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("search budget exceeded: {required} candidates > {limit}")]
    BudgetExceeded { required: u128, limit: u128 },

    #[error("frequencies are not dissociate: {0}")]
    NotDissociate(String),

    #[error("measure fails the moment constraints: {0}")]
    MomentCheckFailed(String),

    #[error("no indicator exists for this separation and degree budget")]
    InfeasibleSeparation,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Lp(#[from] crate::lp::LpError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
