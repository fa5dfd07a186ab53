//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits as nt;

use crate::tol::Tolerances;

/// Real floating-point type used for matrix entries (as real and imaginary
/// parts of [`num_complex::Complex`]) and for spectra.
pub trait Real:
    nt::Float
    + nt::FloatConst
    + nt::FromPrimitive
    + nt::NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Default numerical slack for this precision.
    fn tolerances() -> Tolerances;

    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as nt::FromPrimitive>::from_f64(x).expect("f64 literal fits the scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        nt::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn tolerances() -> Tolerances {
        Tolerances::default()
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances {
        Tolerances {
            herm: 1e-5,
            psd: 1e-4,
            eig: 1e-4,
            fun: 1e-4,
            compare: 1e-4,
            violation: 1e-2,
            jacobi_offdiag: 1e-6,
            jacobi_max_sweeps: 100,
        }
    }
}

/// `max(1, x)`, the scale factor used by every relative tolerance.
#[inline]
pub fn unit_floor<T: Real>(x: T) -> T {
    x.max(T::one())
}
