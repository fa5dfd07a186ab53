use super::eig::{hermitian_eig, Eigen};
use super::matrix::ComplexMatrix;
use super::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::scalar::{unit_floor, Real};

/// Square matrix equal to its conjugate transpose. Construction symmetrizes
/// via `(M + M*)/2` and keeps the pre-symmetrization defect.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T: Real> {
    inner: ComplexMatrix<T>,
    defect: T,
}

impl<T: Real> HermitianMatrix<T> {
    /// Accepts `m` when `max|M − M*| ≤ ε_herm · max(1, max|M|)`.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        m.ensure_square()?;
        let defect = m.hermitian_defect();
        let limit = T::lit(T::tolerances().herm) * unit_floor(m.max_abs());
        if defect > limit {
            return Err(Error::NotHermitian {
                defect: defect.as_f64(),
                limit: limit.as_f64(),
            });
        }
        Ok(Self::symmetrize(m))
    }

    /// Symmetrizes without the defect check, for products that are Hermitian
    /// in exact arithmetic. Panics on non-square input.
    pub fn symmetrize(m: ComplexMatrix<T>) -> Self {
        let n = m.ensure_square().expect("square matrix");
        let defect = m.hermitian_defect();
        let mut s = m;
        let half = T::lit(0.5);
        for i in 0..n {
            s[(i, i)].im = T::zero();
            for j in (i + 1)..n {
                let avg = (s[(i, j)] + s[(j, i)].conj()) * half;
                s[(i, j)] = avg;
                s[(j, i)] = avg.conj();
            }
        }
        Self { inner: s, defect }
    }

    /// `(X + X*)/2`.
    pub fn hermitian_part(x: &ComplexMatrix<T>) -> Result<Self> {
        x.ensure_square()?;
        let sum = x.add(&x.adjoint())?;
        Ok(Self::symmetrize(sum.scale(T::lit(0.5))))
    }

    pub fn identity(n: usize) -> Self {
        Self::symmetrize(ComplexMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self::symmetrize(ComplexMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn defect(&self) -> T {
        self.defect
    }

    pub fn as_matrix(&self) -> &ComplexMatrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.inner
    }

    pub fn eig(&self) -> Result<Eigen<T>> {
        hermitian_eig(self)
    }

    pub fn eigenvalues(&self) -> Result<Spectrum<T>> {
        Ok(hermitian_eig(self)?.values)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::symmetrize(self.inner.sub(&other.inner)?))
    }

    /// `X* · self · X`, Hermitian by construction.
    pub fn congruence(&self, x: &ComplexMatrix<T>) -> Result<Self> {
        let m = x.adjoint().matmul(&self.inner)?.matmul(x)?;
        Ok(Self::symmetrize(m))
    }
}

/// Hermitian matrix with `λ_min ≥ −ε_psd · max(1, λ_max)`. The
/// eigendecomposition computed for validation is cached.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix<T: Real> {
    herm: HermitianMatrix<T>,
    eig: Eigen<T>,
}

impl<T: Real> PsdMatrix<T> {
    pub fn new(h: HermitianMatrix<T>) -> Result<Self> {
        let eig = h.eig()?;
        let limit = T::lit(T::tolerances().psd) * unit_floor(eig.values.max());
        let min = eig.values.min();
        if min < -limit {
            return Err(Error::NotPsd {
                min_eig: min.as_f64(),
                limit: limit.as_f64(),
            });
        }
        Ok(Self { herm: h, eig })
    }

    pub fn from_matrix(m: ComplexMatrix<T>) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// For matrices PSD in exact arithmetic (`G G*`, `X* A X`, sums of PSD).
    /// Still validated against the PSD tolerance.
    pub(crate) fn from_product(m: ComplexMatrix<T>) -> Result<Self> {
        Self::new(HermitianMatrix::symmetrize(m))
    }

    /// Nearest PSD matrix in Frobenius norm: negative eigenvalues set to zero.
    pub fn clamp_from(h: &HermitianMatrix<T>) -> Result<Self> {
        let eig = h.eig()?;
        let m = eig.apply(|l| l.max(T::zero()));
        Self::from_product(m)
    }

    pub fn identity(n: usize) -> Self {
        Self::new(HermitianMatrix::identity(n)).expect("identity is PSD")
    }

    pub fn from_diag(d: &[f64]) -> Result<Self> {
        let d: Vec<T> = d.iter().map(|&x| T::lit(x)).collect();
        Self::from_matrix(ComplexMatrix::from_diag(&d))
    }

    pub fn dim(&self) -> usize {
        self.herm.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix<T> {
        &self.herm
    }

    pub fn as_matrix(&self) -> &ComplexMatrix<T> {
        self.herm.as_matrix()
    }

    pub fn eig(&self) -> &Eigen<T> {
        &self.eig
    }

    pub fn spectrum(&self) -> &Spectrum<T> {
        &self.eig.values
    }

    /// Numerical rank: eigenvalues above `rel_tol · λ_max`.
    pub fn rank(&self, rel_tol: T) -> usize {
        self.eig.values.rank(rel_tol)
    }

    pub fn scale(&self, s: T) -> Result<Self> {
        if s < T::zero() {
            return Err(Error::InvalidArgument("PSD matrices scale by non-negative factors".into()));
        }
        Self::from_product(self.as_matrix().scale(s))
    }

    /// `X* · self · X`.
    pub fn congruence(&self, x: &ComplexMatrix<T>) -> Result<Self> {
        Self::new(self.herm.congruence(x)?)
    }

    pub fn ensure_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", self.dim()),
                actual: format!("{0}x{0}", other.dim()),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    type M = ComplexMatrix<f64>;

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn records_defect_and_symmetrizes() {
        let m = M::from_rows(&[&[1.0, 1.0 + 1e-14], &[1.0, 1.0]]).unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert!(h.defect() > 0.0);
        assert_eq!(h.as_matrix().hermitian_defect(), 0.0);
    }

    #[test]
    fn hermitian_part_of_nilpotent() {
        let x = M::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let h = HermitianMatrix::hermitian_part(&x).unwrap();
        assert_eq!(h.as_matrix()[(0, 1)], Complex::new(0.5, 0.0));
        assert_eq!(h.as_matrix()[(1, 0)], Complex::new(0.5, 0.0));
    }

    #[test]
    fn psd_membership() {
        assert!(PsdMatrix::<f64>::from_diag(&[1.0, 0.0]).is_ok());
        assert!(PsdMatrix::<f64>::from_diag(&[1.0, -1e-12]).is_ok());
        assert!(matches!(PsdMatrix::<f64>::from_diag(&[1.0, -1e-3]), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn clamp_projects() {
        let h = HermitianMatrix::new(M::from_diag(&[2.0, -1.0])).unwrap();
        let p = PsdMatrix::clamp_from(&h).unwrap();
        assert_eq!(p.spectrum().values(), &[2.0, 0.0]);
    }
}
