use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sampling plan does not intersect the finite domain of the weight")]
    EmptyGrid,
    #[error("truncated product cannot reach tolerance at |z| = {modulus} (truncation order {order})")]
    TruncationBudgetExceeded { modulus: f64, order: usize },
    #[error("{point} is not a zero of the function (|F| = {residual:e})")]
    NotAZero { point: String, residual: f64 },
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("majorant appears unbounded within budget (value {0:e})")]
    Unbounded(f64),
    #[error("degenerate linear program: {0}")]
    InfeasibleDegenerate(String),
    #[error("duality gap {gap:e} exceeds tolerance {tol:e}")]
    DualityGap { gap: f64, tol: f64 },
    #[error("quadrature budget exhausted after {evaluations} evaluations (error estimate {estimate:e})")]
    QuadratureBudget { evaluations: usize, estimate: f64 },
    #[error("weight is infinite at zero {0} of the certificate")]
    WeightInfiniteAtZero(f64),
    #[error("function vanishes at the origin")]
    ZeroAtOrigin,
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("measure is not consistent with a single normalization (max mismatch {0:e})")]
    InconsistentMeasure(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("simplex failure: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;
