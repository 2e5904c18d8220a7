use thiserror::Error;

/// Errors raised by the numerical solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("non-finite value in {context} at node {index}")]
    NonFinite { context: &'static str, index: usize },
    #[error("grid has {n} nodes, operation needs at least {required}")]
    GridTooSmall { n: usize, required: usize },
    #[error("grid functions are sampled on different grids")]
    GridMismatch,
    #[error("fractional order {value} outside {range}")]
    OrderOutOfRange { value: f64, range: &'static str },
    #[error("forcing does not vanish at the interval start: f(a) = {value}")]
    NonzeroForcingAtStart { value: f64 },
    #[error("initial-condition system is singular (determinant {determinant})")]
    SingularConstantFit { determinant: f64 },
    #[error("leading coefficient of the general equation is zero")]
    DegenerateLeadingCoefficient,
    #[error("not contractive: q={q}")]
    NotContractive { q: f64 },
    #[error("Picard iteration did not converge in {iterations} iterations (last difference {last_diff})")]
    MaxIterationsExceeded { iterations: usize, last_diff: f64 },
    #[error("solvability condition violated: denominator {denominator}")]
    SolvabilityViolation { denominator: f64 },
    #[error("Volterra step is near singular: 1 + w0 = {pivot}")]
    NearSingularStep { pivot: f64 },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
