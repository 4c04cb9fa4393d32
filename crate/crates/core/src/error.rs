use thiserror::Error;

use crate::optimize::EigenResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient vector is empty")]
    EmptyVector,

    #[error("coefficient {index} is negative or not finite ({value})")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("coefficient vector has no positive entry")]
    ZeroVector,

    #[error("invalid dimension {d}: {reason}")]
    InvalidDimension { d: usize, reason: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("power iteration did not converge in {} iterations (residual {:.3e})", .best.iterations, .best.residual)]
    MaxIterationsExceeded { best: Box<EigenResult> },

    #[error("d = {d} exceeds the budget of {limit}")]
    BudgetExceeded { d: usize, limit: usize },

    #[error("delta = {0} outside (0, 1/4)")]
    DeltaOutOfRange(f64),

    #[error("x = {0} outside (0, 1)")]
    XOutOfRange(f64),

    #[error("parameter {name} = {value} out of range")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("quadrature error estimate {estimate:.3e} above target {target:.3e}")]
    QuadratureNotConverged { estimate: f64, target: f64 },

    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
