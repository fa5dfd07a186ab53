//! Seeded random instances. All generators take the RNG explicitly.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::hermitian::{HermitianMatrix, PsdMatrix};
use super::matrix::{ComplexMatrix, Field};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub type InstanceRng = ChaCha8Rng;

/// Independent RNG stream `index` under `seed`. Streams do not depend on
/// how many other streams are drawn or in what order.
pub fn substream(seed: u64, index: u64) -> InstanceRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let x: f64 = rng.sample(StandardNormal);
    T::lit(x)
}

/// i.i.d. standard normal entries; complex fields draw independent real and
/// imaginary parts.
pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, field: Field) -> ComplexMatrix<T> {
    let data = (0..rows * cols)
        .map(|_| {
            let re = normal(rng);
            let im = match field {
                Field::Real => T::zero(),
                Field::Complex => normal(rng),
            };
            Complex::new(re, im)
        })
        .collect();
    ComplexMatrix::from_parts(rows, cols, data)
}

/// `G G*` with `G` an `n × rank` Gaussian matrix.
pub fn random_psd_with<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize, field: Field) -> Result<PsdMatrix<T>> {
    if n == 0 || rank == 0 || rank > n {
        return Err(Error::InvalidArgument(format!("need 1 <= rank <= n, got n = {n}, rank = {rank}")));
    }
    let g = gaussian_matrix::<T, _>(rng, n, rank, field);
    PsdMatrix::from_product(g.mul(&g.adjoint()))
}

/// Deterministic Wishart-type PSD matrix for a fixed `(n, rank, seed, field)`.
pub fn random_psd<T: Real>(n: usize, rank: usize, seed: u64, field: Field) -> Result<PsdMatrix<T>> {
    random_psd_with(&mut ChaCha8Rng::seed_from_u64(seed), n, rank, field)
}

/// Haar-distributed unitary (orthogonal for the real field): Gram-Schmidt
/// QR of a Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> ComplexMatrix<T> {
    let g = gaussian_matrix::<T, _>(rng, n, n, field);
    let mut q = ComplexMatrix::<T>::zeros(n, n);
    for j in 0..n {
        let mut v: Vec<Complex<T>> = (0..n).map(|i| g[(i, j)]).collect();
        // Modified Gram-Schmidt, two passes.
        for _ in 0..2 {
            for k in 0..j {
                let mut dot = Complex::new(T::zero(), T::zero());
                for i in 0..n {
                    dot += q[(i, k)].conj() * v[i];
                }
                for i in 0..n {
                    v[i] -= q[(i, k)] * dot;
                }
            }
        }
        let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        for i in 0..n {
            q[(i, j)] = v[i] / norm;
        }
    }
    q
}

/// Random Hermitian direction with unit Frobenius norm.
pub fn random_hermitian_direction<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> HermitianMatrix<T> {
    let g = gaussian_matrix::<T, _>(rng, n, n, field);
    let h = HermitianMatrix::hermitian_part(&g).expect("square");
    let norm = h.as_matrix().frobenius_norm();
    if norm > T::zero() {
        HermitianMatrix::symmetrize(h.as_matrix().scale(T::one() / norm))
    } else {
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_rank_wishart() {
        for seed in 0..5 {
            let a = random_psd::<f64>(3, 3, seed, Field::Real).unwrap();
            let s = a.spectrum();
            assert!(s.min() > 1e-12 * s.max());
        }
    }

    #[test]
    fn deficient_rank() {
        for field in [Field::Real, Field::Complex] {
            let a = random_psd::<f64>(4, 2, 3, field).unwrap();
            assert_eq!(a.rank(1e-10), 2);
            assert_eq!(a.as_matrix().field(), field);
        }
    }

    #[test]
    fn deterministic() {
        let a = random_psd::<f64>(4, 3, 17, Field::Complex).unwrap();
        let b = random_psd::<f64>(4, 3, 17, Field::Complex).unwrap();
        assert_eq!(a.as_matrix(), b.as_matrix());
        let c = random_psd::<f64>(4, 3, 18, Field::Complex).unwrap();
        assert_ne!(a.as_matrix(), c.as_matrix());
    }

    #[test]
    fn invalid_rank() {
        assert!(random_psd::<f64>(3, 0, 1, Field::Real).is_err());
        assert!(random_psd::<f64>(3, 4, 1, Field::Real).is_err());
    }

    #[test]
    fn substreams_are_independent_of_draw_order() {
        let mut a = substream(9, 2);
        let _ = substream(9, 1).random::<u64>();
        let mut b = substream(9, 2);
        assert_eq!(a.random::<u64>(), b.random::<u64>());
        assert_ne!(substream(9, 1).random::<u64>(), substream(9, 2).random::<u64>());
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = substream(1, 0);
        for field in [Field::Real, Field::Complex] {
            let u = random_unitary::<f64, _>(&mut rng, 5, field);
            let err = u.adjoint().mul(&u).sub(&ComplexMatrix::identity(5)).unwrap().frobenius_norm();
            assert!(err < 1e-13, "{err}");
        }
    }
}
