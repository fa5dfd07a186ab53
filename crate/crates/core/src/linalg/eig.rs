//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `h_pq` with a diagonal
//! unitary, then applies the classical real symmetric Jacobi rotation. On
//! real input every phase is ±1, so real matrices stay exactly real.

use num_complex::Complex;
use num_traits::Zero;

use super::hermitian::HermitianMatrix;
use super::matrix::ComplexMatrix;
use super::spectrum::{Spectrum, SpectrumKind};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigenpairs of a Hermitian matrix: `h = vectors · diag(values) · vectors*`,
/// values sorted non-ascending with columns permuted to match.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen<T: Real> {
    pub values: Spectrum<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigen<T> {
    /// `U · diag(f(λ)) · U*`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let d: Vec<T> = self.values.values().iter().map(|&l| f(l)).collect();
        self.vectors.scale_columns(&d).mul(&self.vectors.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.apply(|l| l)
    }
}

fn off_diagonal_norm<T: Real>(a: &[Complex<T>], n: usize) -> T {
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig<T: Real>(h: &HermitianMatrix<T>) -> Result<Eigen<T>> {
    let tol = T::tolerances();
    let n = h.dim();
    let mut a: Vec<Complex<T>> = h.as_matrix().as_slice().to_vec();
    let mut v = ComplexMatrix::<T>::identity(n);
    let scale = h.as_matrix().frobenius_norm();
    let threshold = T::lit(tol.jacobi_offdiag) * scale;
    let hundred = T::lit(100.0);

    let mut converged = n <= 1;
    let mut sweeps = 0;
    while !converged {
        if off_diagonal_norm(&a, n) <= threshold {
            converged = true;
            break;
        }
        if sweeps == tol.jacobi_max_sweeps {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let abs_g = g.norm();
                if abs_g.is_zero() {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Negligible pivot relative to both diagonal entries.
                if sweeps > 4 && app.abs() + hundred * abs_g == app.abs() && aqq.abs() + hundred * abs_g == aqq.abs() {
                    a[p * n + q] = Complex::zero();
                    a[q * n + p] = Complex::zero();
                    continue;
                }
                let phase = g / abs_g;
                let theta = (aqq - app) / (abs_g + abs_g);
                let t = if theta.is_zero() {
                    T::one()
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let pc = phase.conj();
                // A <- A J (columns p, q)
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = aip * c - aiq * pc * s;
                    a[i * n + q] = aip * s + aiq * pc * c;
                }
                // A <- J* A (rows p, q)
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = apj * c - aqj * phase * s;
                    a[q * n + j] = apj * s + aqj * phase * c;
                }
                a[p * n + q] = Complex::zero();
                a[q * n + p] = Complex::zero();
                a[p * n + p].im = T::zero();
                a[q * n + q].im = T::zero();
                // V <- V J
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * pc * s;
                    v[(i, q)] = vip * s + viq * pc * c;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            sweeps,
            residual: off_diagonal_norm(&a, n).as_f64(),
        });
    }

    let diag: Vec<T> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable: ties keep the solver's column order.
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite eigenvalues"));
    let values = Spectrum::new(order.iter().map(|&i| diag[i]).collect(), SpectrumKind::Eigenvalues);
    let vectors = v.select_columns(&order);
    Ok(Eigen { values, vectors })
}
