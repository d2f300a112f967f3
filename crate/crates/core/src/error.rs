use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("argument outside the domain of {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error(
        "quadrature did not converge: |error| {error:.3e} exceeds tolerance {tolerance:.3e}, \
         worst subinterval [{worst_lo:.6e}, {worst_hi:.6e}]"
    )]
    Quadrature {
        error: f64,
        tolerance: f64,
        worst_lo: f64,
        worst_hi: f64,
    },

    #[error("root bracketing failed for {op}: sign pattern {pattern}")]
    Bracket { op: &'static str, pattern: String },

    #[error("extrapolation did not converge: {0}")]
    Extrapolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    /// True for failures caused by user input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. })
    }
}
