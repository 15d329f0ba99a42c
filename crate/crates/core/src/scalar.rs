//! Floating-point scalar abstraction.
//!
//! Every module in this crate is generic over [`Real`], so the whole stack
//! (linear algebra, kinematics, channel, witnesses, Monte Carlo) runs at
//! `f32` or `f64`. Concrete aliases for the common `f64` instantiation live
//! at the crate root. Validation tolerances are per-scalar since a sensible
//! Hermiticity bound at `f64` is unreachable at `f32`.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{de::DeserializeOwned, Serialize};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Complex number over the crate scalar.
pub type Cx<T> = Complex<T>;

/// Scalar type the crate is generic over; implemented for `f32` and `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Tolerance for Hermiticity and trace-one checks.
    fn tol_hermitian() -> Self;
    /// Eigenvalue floor when checking positive semidefiniteness.
    fn tol_psd() -> Self;
    /// Entrywise tolerance for unitarity and unbiasedness checks.
    fn tol_unitary() -> Self;
    /// Uniform draw from `[0, 1)`.
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Standard normal draw.
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f64 {
    fn tol_hermitian() -> Self {
        1e-12
    }
    fn tol_psd() -> Self {
        1e-10
    }
    fn tol_unitary() -> Self {
        1e-10
    }
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen()
    }
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Real for f32 {
    fn tol_hermitian() -> Self {
        1e-5
    }
    fn tol_psd() -> Self {
        1e-4
    }
    fn tol_unitary() -> Self {
        1e-4
    }
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen()
    }
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

/// Convert an `f64` literal to the scalar type.
///
/// Panics only if the literal is not representable, which cannot happen for
/// the finite constants used in this crate.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite literal")
}

/// Complex zero.
#[inline]
pub fn czero<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::zero())
}

/// Complex one.
#[inline]
pub fn cone<T: Real>() -> Cx<T> {
    Complex::new(T::one(), T::zero())
}

/// Purely real complex number.
#[inline]
pub fn cre<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

/// Purely imaginary complex number.
#[inline]
pub fn cim<T: Real>(x: T) -> Cx<T> {
    Complex::new(T::zero(), x)
}
