//! The two named example functions.
//!
//! `example1`: `f(z) = (2/√π)∫₀ᶻ t² e^{−t²} dt + 1/2`.
//! `example2`: `f(z) = ∫₀ᶻ (a t³ + b t) e^{−t³} dt + 1/3`, where `a` and `b` normalize
//! `a∫₀^∞ t³e^{−t³}dt = b∫₀^∞ t e^{−t³}dt = 1/3`. Both moments are computed here by
//! quadrature rather than taken from Γ tables.

use num_complex::Complex;

use crate::contour::integrate_segment;
use crate::polyexp::{PolyExpFunction, Polynomial};
use crate::scalar::{cplx, Real};

/// `e^{−t³}` is below `e^{−512}` beyond this cut, far under double rounding of the moments.
const MOMENT_CUTOFF: f64 = 8.0;

fn cubic_moment<T: Real>(power: i32) -> T {
    let g = |z: Complex<T>| Ok(z.powi(power) * (-(z * z * z)).exp());
    let tol = T::epsilon() * T::lit(4.0);
    integrate_segment(g, cplx(0.0, 0.0), cplx(MOMENT_CUTOFF, 0.0), tol)
        .expect("moment quadrature on a smooth integrand")
        .re
}

/// `(a, b)` for example 2.
pub fn example2_coefficients<T: Real>() -> (T, T) {
    let third = T::one() / T::lit(3.0);
    (third / cubic_moment::<T>(3), third / cubic_moment::<T>(1))
}

pub fn example1<T: Real>() -> PolyExpFunction<T> {
    let k = T::lit(2.0) / T::PI().sqrt();
    PolyExpFunction::new(
        Polynomial::new(vec![cplx(0.0, 0.0), cplx(0.0, 0.0), Complex::new(k, T::zero())]),
        Polynomial::from_real(&[0.0, 0.0, -1.0]),
        cplx(0.5, 0.0),
    )
}

pub fn example2<T: Real>() -> PolyExpFunction<T> {
    let (a, b) = example2_coefficients::<T>();
    let zero = cplx(0.0, 0.0);
    PolyExpFunction::new(
        Polynomial::new(vec![zero, Complex::new(b, T::zero()), zero, Complex::new(a, T::zero())]),
        Polynomial::from_real(&[0.0, 0.0, 0.0, -1.0]),
        Complex::new(T::one() / T::lit(3.0), T::zero()),
    )
}

/// `f(z) = e^z` written as `∫₀ᶻ e^t dt + 1`.
pub fn exponential<T: Real>() -> PolyExpFunction<T> {
    PolyExpFunction::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[0.0, 1.0]), cplx(1.0, 0.0))
}

/// Looks up `example1`, `example2` or `exp` (also accepts the bare numbers `1`, `2`).
pub fn by_name<T: Real>(name: &str) -> Option<PolyExpFunction<T>> {
    match name {
        "1" | "example1" => Some(example1()),
        "2" | "example2" => Some(example2()),
        "exp" => Some(exponential()),
        _ => None,
    }
}
