use serde::{Deserialize, Serialize};

/// Centralized numerical slack. All values are relative to a scale of
/// `max(1, λ_max)` or `max(1, max|entry|)` at the call site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Hermitian defect accepted by [`crate::HermitianMatrix::new`].
    pub herm: f64,
    /// Negative eigenvalue slack for PSD membership and clamping.
    pub psd: f64,
    /// Eigendecomposition reconstruction and orthogonality.
    pub eig: f64,
    /// Matrix functions (square root, pseudo-inverse).
    pub fun: f64,
    /// Inequality comparison: `lhs <= rhs + compare * max(1, |rhs|)`.
    pub compare: f64,
    /// A counterexample must beat its bound by more than this.
    pub violation: f64,
    /// Jacobi stops once off-diagonal Frobenius mass is below this fraction of `‖H‖_F`.
    pub jacobi_offdiag: f64,
    pub jacobi_max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-12,
            psd: 1e-10,
            eig: 1e-11,
            fun: 1e-10,
            compare: 1e-9,
            violation: 1e-6,
            jacobi_offdiag: 1e-14,
            jacobi_max_sweeps: 100,
        }
    }
}
