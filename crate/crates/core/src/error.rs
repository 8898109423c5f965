use thiserror::Error;

use crate::operators::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{label} index {value} out of range (bound {bound})")]
    IndexOutOfRange {
        label: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("matrix is not Hermitian: max |M - M^H| = {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(ValidationReport),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("excitation number {n} exceeds boson truncation n_max = {n_max}")]
    Truncation { n: usize, n_max: usize },

    #[error(
        "exhaustive principal-minor search is limited to dim <= {max} (got {dim}); \
         use the smallest eigenvalue instead"
    )]
    Capability { dim: usize, max: usize },

    #[error("operator does not commute with the symmetry projector: max |[H, P]| = {defect:.3e}")]
    SymmetryViolation { defect: f64 },

    #[error(
        "steady state is not unique (condition estimate {condition:.3e}); \
         conserved sectors need sector_steady_state"
    )]
    DegenerateSteadyState { condition: f64 },

    #[error("steady-state residual {residual:.3e} above tolerance {tolerance:.1e}")]
    Convergence { residual: f64, tolerance: f64 },

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status: 1 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegenerateSteadyState { .. } | Error::Convergence { .. } | Error::Eigen(_) => 3,
            _ => 1,
        }
    }
}
