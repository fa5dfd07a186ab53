use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Scalar field of a matrix. Real matrices are stored with
/// zero imaginary parts and serialize as plain numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Field of a product/sum: complex wins.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Field::Real => "real",
            Field::Complex => "complex",
        })
    }
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            _ => Err(Error::Parse(format!("unknown field `{s}` (expected real|complex)"))),
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                actual: format!("{} entries", data.len()),
            });
        }
        if let Some(i) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: i / cols.max(1),
                col: i % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[T]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    /// Real matrix from nested rows of `f64` literals.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged rows".into()));
        }
        let data: Vec<T> = rows.iter().flat_map(|row| row.iter().map(|&x| T::lit(x))).collect();
        Self::from_real(r, c, &data)
    }

    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_parts(rows, cols, vec![Complex::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = Complex::new(x, T::zero());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// `Real` when every imaginary part is exactly zero.
    pub fn field(&self) -> Field {
        if self.data.iter().all(|z| z.im.is_zero()) {
            Field::Real
        } else {
            Field::Complex
        }
    }

    /// Projects onto `field`: declaring a matrix real drops imaginary parts.
    pub fn with_field(mut self, field: Field) -> Self {
        if field == Field::Real {
            for z in &mut self.data {
                z.im = T::zero();
            }
        }
        self
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub(crate) fn shape_str(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    pub fn ensure_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.shape_str(),
                actual: other.shape_str(),
            });
        }
        Ok(())
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)].conj());
            }
        }
        Self::from_parts(self.cols, self.rows, out)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                actual: format!("{} rows", rhs.rows),
            });
        }
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![Complex::zero(); n * p];
        for i in 0..n {
            for l in 0..m {
                let a = self.data[i * m + l];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[l * p..(l + 1) * p];
                let dst = &mut out[i * p..(i + 1) * p];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(Self::from_parts(n, p, out))
    }

    /// `self * rhs`, panicking on shape mismatch. Internal use only where
    /// shapes are guaranteed by construction.
    pub(crate) fn mul(&self, rhs: &Self) -> Self {
        self.matmul(rhs).expect("shapes checked by construction")
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        self.ensure_same_shape(rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_parts(self.rows, self.cols, data))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        let data = self.data.iter().map(|&z| z * s).collect();
        Self::from_parts(self.rows, self.cols, data)
    }

    /// `a * self + b * other`.
    pub fn lincomb(&self, a: T, other: &Self, b: T) -> Result<Self> {
        self.zip_with(other, |x, y| x * a + y * b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Copy of the block `rows r0..r1`, `cols c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            out.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c1]);
        }
        Self::from_parts(r1 - r0, c1 - c0, out)
    }

    /// Assembles `[[a, b], [c, d]]`. Blocks must be conformal.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("conformal blocks around {}", a.shape_str()),
                actual: format!("{} {} {}", b.shape_str(), c.shape_str(), d.shape_str()),
            });
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..a.rows {
            out.extend_from_slice(&a.data[i * a.cols..(i + 1) * a.cols]);
            out.extend_from_slice(&b.data[i * b.cols..(i + 1) * b.cols]);
        }
        for i in 0..c.rows {
            out.extend_from_slice(&c.data[i * c.cols..(i + 1) * c.cols]);
            out.extend_from_slice(&d.data[i * d.cols..(i + 1) * d.cols]);
        }
        Ok(Self::from_parts(rows, cols, out))
    }

    /// Columns `idx` of `self`, in order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                out.push(self[(i, j)]);
            }
        }
        Self::from_parts(self.rows, idx.len(), out)
    }

    /// Multiplies column `j` by `d[j]`.
    pub fn scale_columns(&self, d: &[T]) -> Self {
        assert_eq!(d.len(), self.cols);
        let mut m = self.clone();
        for i in 0..self.rows {
            for (j, &s) in d.iter().enumerate() {
                m.data[i * self.cols + j] *= s;
            }
        }
        m
    }

    /// `max|self - self*|` for square matrices.
    pub fn hermitian_defect(&self) -> T {
        let n = self.rows;
        let mut defect = T::zero();
        for i in 0..n {
            for j in i..n {
                defect = defect.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        defect
    }

    /// Converts to another precision.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        let data = self
            .data
            .iter()
            .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
            .collect();
        ComplexMatrix::from_parts(self.rows, self.cols, data)
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn rejects_non_finite() {
        let err = M::from_real(1, 2, &[1.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 0, col: 1 }));
        assert!(M::from_real(2, 2, &[1.0]).is_err());
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = M::from_vec(
            2,
            2,
            vec![
                Complex::new(1.0, 1.0),
                Complex::new(2.0, 0.0),
                Complex::new(0.0, -1.0),
                Complex::new(3.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(a.field(), Field::Complex);
        let aa = a.adjoint().mul(&a);
        assert!(aa.hermitian_defect() < 1e-15);
        // (A*A)_{00} = |1+i|^2 + |-i|^2 = 3
        assert_eq!(aa[(0, 0)], Complex::new(3.0, 0.0));
    }

    #[test]
    fn blocks_round_trip() {
        let m = M::from_rows(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], &[7.0, 8.0, 9.0]]).unwrap();
        let a = m.block(0, 1, 0, 1);
        let b = m.block(0, 1, 1, 3);
        let c = m.block(1, 3, 0, 1);
        let d = m.block(1, 3, 1, 3);
        assert_eq!(M::from_blocks(&a, &b, &c, &d).unwrap(), m);
        assert!(M::from_blocks(&a, &a, &c, &d).is_err());
    }

    #[test]
    fn field_is_tracked() {
        let r = M::identity(2);
        assert_eq!(r.field(), Field::Real);
        let mut c = r.clone();
        c[(0, 1)] = Complex::new(0.0, 1.0);
        assert_eq!(c.field(), Field::Complex);
        assert_eq!(r.mul(&c).field(), Field::Complex);
        assert_eq!(c.with_field(Field::Real)[(0, 1)], Complex::new(0.0, 0.0));
    }
}
