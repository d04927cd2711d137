use thiserror::Error;

/// Errors raised by the spectral toolkit.
#[derive(Debug, Error)]
pub enum PtError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("irrep {irrep} does not belong to point group {group}")]
    IncompatibleIrrep { irrep: String, group: String },

    #[error("QR iteration did not converge for {context} at g = {coupling} after {iterations} sweeps")]
    NoConvergence {
        context: String,
        coupling: String,
        iterations: usize,
    },

    #[error("characteristic polynomial requested for dimension {dim} > {max}; use the eigenvalue path instead")]
    DimensionGuard { dim: usize, max: usize },

    #[error("level cannot be tracked: {0}")]
    Untrackable(String),

    #[error("no matching within tolerance {tol:e}: worst unmatched distance {worst:e}")]
    PairingFailed { tol: f64, worst: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PtError {
    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            PtError::NoConvergence { .. } | PtError::Untrackable(_) | PtError::PairingFailed { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, PtError>;
