use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: defect {defect:e} exceeds {limit:e}")]
    NotHermitian { defect: f64, limit: f64 },
    #[error("matrix is not positive semidefinite: lambda_min = {min_eig:e}, limit {limit:e}")]
    NotPsd { min_eig: f64, limit: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NotConverged { sweeps: usize, residual: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("inequality holds trivially: {0}")]
    TriviallyTrue(String),
    #[error("q = {q} is outside the open interval (0, 1) required by the proof pipeline")]
    PipelineDomain { q: f64 },
    #[error("proof step `{step}` failed: residual `{residual}` = {value:e} exceeds gate {gate:e}")]
    StepFailed {
        step: String,
        residual: String,
        value: f64,
        gate: f64,
    },
    #[error("range violation: projector leaves the range of A (defect {defect:e})")]
    RangeViolation { defect: f64 },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
