use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument must be a positive integer, got 0")]
    ZeroArgument,

    #[error("{what} must be odd, got {value}")]
    EvenArgument { what: &'static str, value: i64 },

    #[error("{what} = {value} exceeds the compute budget (limit {limit})")]
    BudgetExceeded {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("cannot certify absolute tolerance {tol:e} for L(chi,{s}) within the iteration budget")]
    TailBoundNotCertified { s: f64, tol: f64 },

    #[error("integer {0} has a prime factor outside the supported factorization range")]
    FactorizationOutOfRange(u64),

    #[error("invalid character table: {0}")]
    InvalidCharacter(String),

    #[error("degenerate fit grid: {0}")]
    DegenerateGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
