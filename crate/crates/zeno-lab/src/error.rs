use thiserror::Error;

#[derive(Debug, Error)]
pub enum ZenoError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("hamiltonian is not Hermitian (‖H - H†‖ = {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("exponent too large: ‖tL‖ = {norm:.3e} exceeds the cap {cap:.3e}")]
    ExpOverflow { norm: f64, cap: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("no admissible branch cut: {0}")]
    NoBranchCut(String),

    #[error("branch jump detected: {0}")]
    BranchJump(String),

    #[error("contour too close to the spectrum: {0}")]
    ContourTooClose(String),

    #[error("spectral reconstruction failed (residual {residual:.3e} > {tol:.3e})")]
    Reconstruction { residual: f64, tol: f64 },

    #[error("f(ad_A) is not invertible: {0}")]
    FNotInvertible(String),

    #[error("not a projection: {0}")]
    NotProjection(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ZenoError {
    /// Process exit code used by the command line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            ZenoError::Io(_) => 1,
            ZenoError::Config(_) | ZenoError::Json(_) | ZenoError::InvalidInput(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, ZenoError>;
