use thiserror::Error;

/// Errors raised by the numeric and exact routines of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("log-gamma pole at z = {0}")]
    Pole(String),

    #[error("{what} did not converge (best estimate {best}, error estimate {est_error:e})")]
    NoConvergence {
        what: String,
        best: String,
        est_error: f64,
    },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("degenerate eigenvalues: {0}")]
    DegenerateEigenvalues(String),

    #[error("divergent product factor: {0}")]
    DivergentFactor(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
