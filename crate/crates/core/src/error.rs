use std::fmt;

use thiserror::Error;

/// Failures while building or parsing an expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("empty expression")]
    Empty,
    #[error("'{0}' is a reserved name")]
    ReservedName(String),
    #[error("'{0}' is declared twice")]
    DuplicateName(String),
    #[error("'{0}' is not a valid identifier")]
    InvalidName(String),
    #[error("variable '{0}' is not bound")]
    Unbound(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainReason {
    LogNonPositive,
    SqrtNegative,
    DivisionByZero,
    NonPositiveBase,
    /// Derivative requested through `abs` at 0.
    AbsKink,
    /// Derivative requested through `sqrt` at 0.
    SqrtKink,
    NonFinite,
    External(String),
}

impl fmt::Display for DomainReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainReason::LogNonPositive => f.write_str("log of a non-positive value"),
            DomainReason::SqrtNegative => f.write_str("sqrt of a negative value"),
            DomainReason::DivisionByZero => f.write_str("division by zero"),
            DomainReason::NonPositiveBase => f.write_str("non-integer power of a non-positive base"),
            DomainReason::AbsKink => f.write_str("abs is not differentiable at 0"),
            DomainReason::SqrtKink => f.write_str("sqrt is not differentiable at 0"),
            DomainReason::NonFinite => f.write_str("non-finite result"),
            DomainReason::External(msg) => f.write_str(msg),
        }
    }
}

/// An expression was evaluated outside its domain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason} in `{subexpr}`")]
pub struct DomainError {
    /// The offending subexpression, printed.
    pub subexpr: String,
    pub reason: DomainReason,
}

/// Errors raised by the geometry pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("invalid warped product: {0}")]
    InvalidAmbient(String),
    #[error("point outside the ambient chart: {0}")]
    OutsideChart(String),
    #[error("ambient chart metric is singular (condition number {condition:e})")]
    SingularMetric { condition: f64 },
    #[error("invalid immersion: {0}")]
    InvalidImmersion(String),
    #[error("degenerate immersion: Gram determinant {gram_det:e} at {point:?}")]
    DegenerateImmersion { gram_det: f64, point: Vec<f64> },
    #[error("chart point {point:?} is within {margin:e} of the chart boundary")]
    BoundaryTooClose { point: Vec<f64>, margin: f64 },
    #[error("grid spacing {spacing:e} exceeds the finite-difference limit {limit:e}")]
    GridTooCoarse { spacing: f64, limit: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid rotational profile: {0}")]
    InvalidProfile(String),
    #[error("quadrature did not converge on [{lo}, {hi}] (error estimate {estimate:e})")]
    QuadratureFailure { lo: f64, hi: f64, estimate: f64 },
    #[error("profile radius sigma({u}) = {sigma:e} is numerically zero")]
    SigmaZero { u: f64, sigma: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
