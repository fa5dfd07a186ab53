//! Dense complex linear algebra and the spectral primitives used throughout
//! the crate.

mod eig;
mod hermitian;
mod json;
mod matrix;
mod ops;
pub mod random;
mod spectrum;

pub use eig::{hermitian_eig, Eigen};
pub use hermitian::{HermitianMatrix, PsdMatrix};
pub use matrix::{ComplexMatrix, Field};
pub(crate) use ops::psd_inv_sqrt;
pub use ops::{eigvals_of_product, loewner_leq, psd_sqrt, pseudo_inverse, singular_values, singular_values_gram, LoewnerVerdict};
pub use random::random_psd;
pub use spectrum::{Spectrum, SpectrumKind};
