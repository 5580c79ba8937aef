use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{what} did not converge after {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("conical function not real: re = {re:e}, im = {im:e}")]
    ConicalReality { re: f64, im: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid quantum number: {0}")]
    InvalidQuantumNumber(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("truncation not converged: {what} (estimated relative tail {tail:e})")]
    Truncation { what: &'static str, tail: f64 },

    #[error("point {tau} outside grid ({tau_min}, {tau_max})")]
    OutsideGrid {
        tau: f64,
        tau_min: f64,
        tau_max: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
