//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the numerical core is generic over (`f32`, `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Largest `Re q` for which `e^q` is still evaluated as a plain complex number.
    fn overflow_guard() -> Self;

    /// Converts an `f64` literal. Every literal used in the crate is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    fn overflow_guard() -> Self {
        80.0
    }
}

impl Real for f64 {
    fn overflow_guard() -> Self {
        690.0
    }
}

#[inline]
pub(crate) fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// `a / b` with `b` rescaled first, so `|b|²` cannot overflow for moduli near the top of the range.
#[inline]
pub(crate) fn cdiv<T: Real>(a: Complex<T>, b: Complex<T>) -> Complex<T> {
    let s = b.re.abs().max(b.im.abs());
    if s == T::zero() || !s.is_finite() {
        return a / b;
    }
    (a / s) / (b / s)
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_pi<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x - two_pi * ((x + T::PI()) / two_pi).floor();
    if y <= -T::PI() {
        y = y + two_pi;
    }
    if y > T::PI() {
        y = y - two_pi;
    }
    y
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_2pi<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x - two_pi * (x / two_pi).floor();
    if y >= two_pi {
        y = y - two_pi;
    }
    if y < T::zero() {
        y = T::zero();
    }
    y
}

/// Circular distance between two angles, in `[0, π]`.
pub fn angular_distance<T: Real>(a: T, b: T) -> T {
    wrap_pi(a - b).abs()
}

/// Argument of `z` with the quadrant of a signed zero imaginary part ignored.
pub(crate) fn arg_of<T: Real>(z: Complex<T>) -> T {
    if z.im == T::zero() {
        if z.re < T::zero() {
            T::PI()
        } else {
            T::zero()
        }
    } else {
        z.im.atan2(z.re)
    }
}
