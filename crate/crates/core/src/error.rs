use alloc::string::String;

/// Errors produced by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("sector angle {0} is outside [0, pi/2)")]
    InvalidAngle(f64),
    #[error("whitened angle needs a positive definite real part; use bisection")]
    MethodInapplicable,
    #[error("angle {alpha} is within 1e-8 of the sector angle {sector_angle}")]
    BoundaryAmbiguous { alpha: f64, sector_angle: f64 },
    #[error("invalid norm selector: {0}")]
    InvalidSelector(String),
    #[error("invalid function parameter: {0}")]
    InvalidParameter(String),
    #[error("function is not concave and nondecreasing: {0}")]
    NotConcave(String),
    #[error("block matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    BlockNotPsd { min_eigenvalue: f64 },
    #[error("scale parameter must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("counterexample alarm in {check}: margin {margin:e}")]
    CounterexampleAlarm { check: &'static str, margin: f64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("matrix is not contained in the requested sector")]
    NotInSector,
    #[error("split {split} is invalid for dimension {n}")]
    InvalidSplit { split: usize, n: usize },
    #[error("bound {kind} is not applicable: {reason}")]
    NotApplicable { kind: String, reason: &'static str },
    #[error("angle {alpha} is below the sector angle {sector_angle}")]
    AngleTooSmall { alpha: f64, sector_angle: f64 },
    #[error("exponent must lie in (0, 1], got {0}")]
    InvalidExponent(f64),
    #[error("invalid search range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = core::result::Result<T, Error>;
