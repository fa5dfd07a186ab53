//! Numerical verification toolkit for the matrix norm inequality
//!
//! ```text
//! |||XY*|||² ≤ |||qX*X + (1−q)Y*Y||| · |||(1−q)X*X + qY*Y|||,   q ∈ [0, 1]
//! ```
//!
//! which interpolates between the Cauchy-Schwarz (`q ∈ {0, 1}`) and
//! arithmetic-geometric mean (`q = 1/2`) inequalities for unitarily invariant
//! norms, together with the eigenvalue inequality behind it
//! `λ_k(AB) ≤ λ_k(C(q)C(1−q))`, `C(q) = qA + (1−q)B`.
//!
//! The numerical core is generic over [`Real`] (`f32`, `f64`); the aliases
//! below fix `f64`, which is what the checks, hunts and CLI use.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod error;
pub mod gauge;
pub mod hunt;
pub mod instance;
pub mod linalg;
pub mod pipeline;
pub mod report;
pub mod scalar;
pub mod tol;

pub use error::{Error, Result};
pub use gauge::GaugeSpec;
pub use linalg::{ComplexMatrix, Field, HermitianMatrix, PsdMatrix, Spectrum};
pub use report::CheckReport;
pub use scalar::Real;
pub use tol::Tolerances;

pub type Matrix = ComplexMatrix<f64>;
pub type Hermitian = HermitianMatrix<f64>;
pub type Psd = PsdMatrix<f64>;
pub type Spectrum64 = Spectrum<f64>;

pub type Matrix32 = ComplexMatrix<f32>;
pub type Hermitian32 = HermitianMatrix<f32>;
pub type Psd32 = PsdMatrix<f32>;

/// Crate version embedded in every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
