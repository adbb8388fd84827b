use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The momentum kernel is log-divergent at k = 0 and no subtraction was supplied.
    #[error("kernel is IR-divergent; transform a difference of points instead")]
    IrDivergent,
    /// The quadrature could not certify the requested tolerance.
    #[error("tolerance not met: estimated error {estimate:.3e} exceeds {tolerance:.3e} ({context})")]
    ToleranceNotMet {
        estimate: f64,
        tolerance: f64,
        context: String,
    },
    /// Two objects with incompatible shapes were combined.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// An automaton path carried three or more operator insertions.
    #[error("degree overflow: automaton admits paths with {0} or more field insertions")]
    DegreeOverflow(usize),
    /// A quadratic form that must be positive definite is not.
    #[error("matrix is not positive definite (smallest eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),
    /// The dense eigensolver did not converge.
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),
    /// A finite-difference quotient did not stabilise under step refinement.
    #[error("finite-difference step failure: {0}")]
    StepSize(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by invalid user input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::IrDivergent | Error::DimensionMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
