use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Eigenvalues,
    SingularValues,
}

/// Real values sorted non-ascending; `values()[0]` is λ₁ (or σ₁).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T: Real> {
    values: Vec<T>,
    kind: SpectrumKind,
}

impl<T: Real> Spectrum<T> {
    /// Sorts `values` non-ascending. Singular values are clamped at zero.
    pub fn new(mut values: Vec<T>, kind: SpectrumKind) -> Self {
        if kind == SpectrumKind::SingularValues {
            for v in &mut values {
                *v = v.max(T::zero());
            }
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("spectrum values are finite"));
        Self { values, kind }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The `k`-th largest value, 1-based.
    pub fn kth(&self, k: usize) -> Result<T> {
        if k == 0 || k > self.values.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.values.len(),
            });
        }
        Ok(self.values[k - 1])
    }

    pub fn max(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn min(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    /// Number of values strictly above `rel_tol * max(λ_max, 0)`.
    pub fn rank(&self, rel_tol: T) -> usize {
        let cut = rel_tol * self.max().max(T::zero());
        self.values.iter().filter(|&&v| v > cut).count()
    }

    /// Element-wise power of the (clamped non-negative) values.
    pub fn powf(&self, r: T) -> Vec<T> {
        self.values.iter().map(|&v| v.max(T::zero()).powf(r)).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.as_f64()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_indexes() {
        let s = Spectrum::new(vec![1.0, 3.0, 2.0], SpectrumKind::Eigenvalues);
        assert_eq!(s.values(), &[3.0, 2.0, 1.0]);
        assert_eq!(s.kth(1).unwrap(), 3.0);
        assert_eq!(s.kth(3).unwrap(), 1.0);
        assert!(s.kth(0).is_err());
        assert!(s.kth(4).is_err());
    }

    #[test]
    fn singular_values_are_non_negative() {
        let s = Spectrum::new(vec![-1e-17, 2.0], SpectrumKind::SingularValues);
        assert_eq!(s.values(), &[2.0, 0.0]);
    }

    #[test]
    fn rank_counts_above_cut() {
        let s = Spectrum::new(vec![1.0, 1e-3, 1e-14, 0.0], SpectrumKind::Eigenvalues);
        assert_eq!(s.rank(1e-10), 2);
    }
}
