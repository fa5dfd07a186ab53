//! Spectral primitives built on the Jacobi eigensolver.

use super::hermitian::{HermitianMatrix, PsdMatrix};
use super::matrix::ComplexMatrix;
use super::spectrum::{Spectrum, SpectrumKind};
use crate::error::{Error, Result};
use crate::scalar::{unit_floor, Real};

/// Singular values of `x`, non-ascending, of length `min(rows, cols)`.
///
/// Computed from the Hermitian dilation `[[0, X], [X*, 0]]`, whose spectrum
/// is `±σ_i` padded with zeros. This keeps small singular values accurate to
/// `ε‖X‖` instead of the `√ε‖X‖` of the Gram route.
pub fn singular_values<T: Real>(x: &ComplexMatrix<T>) -> Result<Spectrum<T>> {
    let (r, c) = x.shape();
    let dilation = ComplexMatrix::from_blocks(&ComplexMatrix::zeros(r, r), x, &x.adjoint(), &ComplexMatrix::zeros(c, c))?;
    let eig = HermitianMatrix::symmetrize(dilation).eigenvalues()?;
    let top = eig.values()[..r.min(c)].to_vec();
    Ok(Spectrum::new(top, SpectrumKind::SingularValues))
}

/// `sqrt(λ(X*X))`, the textbook route. Kept as an independent cross-check.
pub fn singular_values_gram<T: Real>(x: &ComplexMatrix<T>) -> Result<Spectrum<T>> {
    let gram = HermitianMatrix::symmetrize(x.adjoint().mul(x));
    let eig = gram.eigenvalues()?;
    let n = x.rows().min(x.cols());
    let vals = eig.values()[..n].iter().map(|&l| l.max(T::zero()).sqrt()).collect();
    Ok(Spectrum::new(vals, SpectrumKind::SingularValues))
}

/// Unique PSD square root. Eigenvalues at roundoff level (`≤ n·ε·λ_max`,
/// including slightly negative ones) are treated as exact zeros: their square
/// roots would otherwise inflate noise from `ε` to `√ε`.
pub fn psd_sqrt<T: Real>(a: &PsdMatrix<T>) -> Result<PsdMatrix<T>> {
    let cut = T::epsilon() * T::lit(a.dim() as f64) * a.spectrum().max();
    let s = a.eig().apply(|l| if l > cut { l.sqrt() } else { T::zero() });
    PsdMatrix::from_product(s)
}

/// `A^{-1/2}` restricted to the range of `A` (pseudo-inverse of the root).
pub(crate) fn psd_inv_sqrt<T: Real>(a: &PsdMatrix<T>, rank_tol: T) -> Result<PsdMatrix<T>> {
    let cut = rank_tol * a.spectrum().max();
    let s = a
        .eig()
        .apply(|l| if l > cut && l > T::zero() { T::one() / l.sqrt() } else { T::zero() });
    PsdMatrix::from_product(s)
}

/// Moore-Penrose inverse of a PSD matrix. Eigenvalues `≤ rank_tol · λ_max`
/// count as exact zeros.
pub fn pseudo_inverse<T: Real>(a: &PsdMatrix<T>, rank_tol: T) -> Result<PsdMatrix<T>> {
    if !(rank_tol > T::zero()) {
        return Err(Error::InvalidArgument(format!("rank_tol must be positive, got {rank_tol}")));
    }
    let cut = rank_tol * a.spectrum().max();
    let inv = a
        .eig()
        .apply(|l| if l > cut && l > T::zero() { T::one() / l } else { T::zero() });
    PsdMatrix::from_product(inv)
}

/// Outcome of a Löwner-order comparison `A ≤ B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoewnerVerdict<T: Real> {
    pub holds: bool,
    /// `λ_min(B − A)`.
    pub margin: T,
    /// Absolute slack used: `tol · max(1, max|A|, max|B|)`.
    pub slack: T,
}

/// Tests `A ≤ B` in the Löwner order.
pub fn loewner_leq<T: Real>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>, tol: T) -> Result<LoewnerVerdict<T>> {
    a.as_matrix().ensure_same_shape(b.as_matrix())?;
    let diff = b.sub(a)?;
    let margin = diff.eigenvalues()?.min();
    let slack = tol * unit_floor(a.as_matrix().max_abs().max(b.as_matrix().max_abs()));
    Ok(LoewnerVerdict {
        holds: margin >= -slack,
        margin,
        slack,
    })
}

/// Eigenvalues of the product `AB` of two PSD matrices.
///
/// `AB` is similar to `A^{1/2} B A^{1/2}`, whose eigenvalues are
/// `σ(A^{1/2} B^{1/2})²`. Squaring singular values keeps small eigenvalues
/// accurate to `ε√(λ_1 λ_j)` rather than `ε λ_1`.
pub fn eigvals_of_product<T: Real>(a: &PsdMatrix<T>, b: &PsdMatrix<T>) -> Result<Spectrum<T>> {
    a.ensure_same_dim(b)?;
    let t = psd_sqrt(a)?.as_matrix().mul(psd_sqrt(b)?.as_matrix());
    let vals = singular_values(&t)?.into_values().into_iter().map(|s| s * s).collect();
    Ok(Spectrum::new(vals, SpectrumKind::Eigenvalues))
}
