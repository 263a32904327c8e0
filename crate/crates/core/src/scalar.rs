//! Scalar abstraction shared by every numerical module.
//!
//! All reconstruction math is written against [`Real`], which is implemented
//! for `f32` and `f64`. Tolerances that are stated for double precision are
//! floored at a small multiple of the scalar's epsilon so that the same code
//! stays meaningful in single precision.

use std::fmt::{Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating-point scalar usable throughout the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Sum + Display + LowerExp + Default
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal fits every Real")
    }

    /// Converts an integer into this scalar.
    #[inline]
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits every Real")
    }

    /// Relative tolerance `rel`, but never tighter than `64·ε`.
    #[inline]
    fn tol(rel: f64) -> Self {
        Self::lit(rel).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Sum + Display + LowerExp + Default
{
}

/// `sin(πx)` with exact argument reduction around the nearest integer.
///
/// Large `x` keeps full relative accuracy because `x - round(x)` is exact.
#[inline]
pub fn sin_pi<R: Real>(x: R) -> R {
    let k = x.round();
    let r = x - k;
    let s = (R::PI() * r).sin();
    if is_odd(k) {
        -s
    } else {
        s
    }
}

/// `cos(πx)` with exact reduction modulo 2.
#[inline]
pub fn cos_pi<R: Real>(x: R) -> R {
    let two = R::lit(2.0);
    let r = x - two * (x / two).round();
    (R::PI() * r).cos()
}

#[inline]
pub(crate) fn is_odd<R: Real>(k: R) -> bool {
    (k / R::lit(2.0)).fract() != R::zero()
}

/// `(-1)^n`.
#[inline]
pub fn alt_sign<R: Real>(n: i64) -> R {
    if n.rem_euclid(2) == 0 {
        R::one()
    } else {
        -R::one()
    }
}

/// Normalized sinc, `sin(πx)/(πx)` with `sinc(0) = 1`.
#[inline]
pub fn sinc<R: Real>(x: R) -> R {
    let px = R::PI() * x;
    if px.abs() < R::lit(1e-4) {
        let p2 = px * px;
        R::one() - p2 / R::lit(6.0) + p2 * p2 / R::lit(120.0)
    } else {
        sin_pi(x) / px
    }
}

/// Sinc of a purely imaginary argument, `sinc(j·a) = sinh(πa)/(πa)`.
#[inline]
pub fn sinc_imag<R: Real>(a: R) -> R {
    let pa = R::PI() * a;
    if pa.abs() < R::lit(1e-4) {
        let p2 = pa * pa;
        R::one() + p2 / R::lit(6.0) + p2 * p2 / R::lit(120.0)
    } else {
        pa.sinh() / pa
    }
}
