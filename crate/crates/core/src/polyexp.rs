//! Polynomial-exponential integrals `f(z) = ∫₀ᶻ p(ζ) e^{q(ζ)} dζ + c`.
//!
//! `f′ = p·e^q` is available in closed form. `f` itself is evaluated by adaptive
//! quadrature along the segment `[0, z]`, refusing to run where `Re q` would push
//! plain floating point out of range. [`ScaledComplex`] carries `e^q` (and the
//! asymptotic approximation built from it) past that range.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::contour::integrate_segment_split;
use crate::error::{Error, Result};
use crate::scalar::{wrap_pi, Real};

/// Points sampled along `[0, z]` before quadrature to detect overflow.
const GUARD_SCAN_POINTS: usize = 64;

/// Polynomial with complex coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Polynomial<T> {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == T::zero() && c.im == T::zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(T::lit(c), T::zero())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex<T>> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        eval_poly(self, z)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * T::from_usize(k).unwrap())
            .collect();
        Self::new(coeffs)
    }
}

/// Horner evaluation; the zero polynomial evaluates to exactly 0.
pub fn eval_poly<T: Real>(poly: &Polynomial<T>, z: Complex<T>) -> Complex<T> {
    poly.coeffs
        .iter()
        .rev()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
}

/// `exp(logmag + i·phase)` with `phase` in `(−π, π]`; `logmag = −∞` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex<T> {
    pub logmag: T,
    pub phase: T,
}

impl<T: Real> ScaledComplex<T> {
    pub fn new(logmag: T, phase: T) -> Self {
        Self { logmag, phase: wrap_pi(phase) }
    }

    pub fn zero() -> Self {
        Self { logmag: T::neg_infinity(), phase: T::zero() }
    }

    pub fn from_complex(w: Complex<T>) -> Self {
        let r = w.norm();
        if r == T::zero() {
            return Self::zero();
        }
        Self::new(r.ln(), crate::scalar::arg_of(w))
    }

    pub fn is_zero(&self) -> bool {
        self.logmag == T::neg_infinity()
    }

    /// Plain complex value, or `None` when the magnitude would overflow.
    pub fn to_complex(&self) -> Option<Complex<T>> {
        if self.is_zero() {
            return Some(Complex::new(T::zero(), T::zero()));
        }
        if self.logmag > T::overflow_guard() {
            return None;
        }
        Some(Complex::from_polar(self.logmag.exp(), self.phase))
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(self.logmag + other.logmag, self.phase + other.phase)
    }

    pub fn div(self, other: Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::new(self.logmag - other.logmag, self.phase - other.phase)
    }

    /// Sum, factored around the larger magnitude.
    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.logmag >= other.logmag { (self, other) } else { (other, self) };
        let ratio = Complex::from_polar((small.logmag - big.logmag).exp(), small.phase - big.phase);
        let sum = Complex::new(T::one(), T::zero()) + ratio;
        let n = sum.norm();
        if n == T::zero() {
            return Self::zero();
        }
        Self::new(big.logmag + n.ln(), big.phase + sum.im.atan2(sum.re))
    }
}

/// The triple `(p, q, c)` defining `f(z) = ∫₀ᶻ p e^q dζ + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyExpFunction<T> {
    pub p: Polynomial<T>,
    pub q: Polynomial<T>,
    pub c: Complex<T>,
    dq: Polynomial<T>,
}

impl<T: Real> PolyExpFunction<T> {
    pub fn new(p: Polynomial<T>, q: Polynomial<T>, c: Complex<T>) -> Self {
        let dq = q.derivative();
        Self { p, q, c, dq }
    }

    /// `deg q`, with 0 for a constant (or zero) exponent.
    pub fn d(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    /// Leading coefficient `A` of `q` when `deg q >= 1`.
    pub fn leading_coefficient(&self) -> Option<Complex<T>> {
        if self.d() >= 1 {
            self.q.leading()
        } else {
            None
        }
    }

    pub fn q_prime(&self) -> &Polynomial<T> {
        &self.dq
    }

    pub fn with_constant(&self, c: Complex<T>) -> Self {
        Self { c, ..self.clone() }
    }
}

/// `e^{q(z)}` as a [`ScaledComplex`]; never overflows.
pub fn eval_scaled_exp<T: Real>(q: &Polynomial<T>, z: Complex<T>) -> ScaledComplex<T> {
    let w = q.eval(z);
    ScaledComplex::new(w.re, w.im)
}

/// `f′(z) = p(z)·e^{q(z)}` in scaled form, no quadrature involved.
pub fn eval_f_prime<T: Real>(f: &PolyExpFunction<T>, z: Complex<T>) -> ScaledComplex<T> {
    ScaledComplex::from_complex(f.p.eval(z)).mul(eval_scaled_exp(&f.q, z))
}

/// Plain-complex integrand `p e^q`, failing where `Re q` crosses the guard.
pub(crate) fn integrand<T: Real>(f: &PolyExpFunction<T>, z: Complex<T>) -> Result<Complex<T>> {
    let qz = f.q.eval(z);
    if !(qz.re <= T::overflow_guard()) {
        return Err(overflow(qz.re, z));
    }
    Ok(f.p.eval(z) * Complex::from_polar(qz.re.exp(), qz.im))
}

fn overflow<T: Real>(re_q: T, z: Complex<T>) -> Error {
    Error::OverflowRegion { re_q: re_q.to_f64_lossy(), at_re: z.re.to_f64_lossy(), at_im: z.im.to_f64_lossy() }
}

/// Rejects segments on which `Re q` exceeds the guard at any scan point.
pub(crate) fn guard_segment<T: Real>(f: &PolyExpFunction<T>, z0: Complex<T>, z1: Complex<T>) -> Result<()> {
    if f.p.is_zero() {
        return Ok(());
    }
    let n = T::from_usize(GUARD_SCAN_POINTS).unwrap();
    for j in 0..=GUARD_SCAN_POINTS {
        let t = T::from_usize(j).unwrap() / n;
        let z = z0 + (z1 - z0) * t;
        let re_q = f.q.eval(z).re;
        if !(re_q <= T::overflow_guard()) {
            return Err(overflow(re_q, z));
        }
    }
    Ok(())
}

/// Initial piece count so that `q` moves by at most about 2 across each piece.
pub(crate) fn initial_pieces<T: Real>(f: &PolyExpFunction<T>, z0: Complex<T>, z1: Complex<T>) -> usize {
    const SAMPLES: usize = 256;
    let n = T::from_usize(SAMPLES).unwrap();
    let mut prev = f.q.eval(z0);
    let mut variation = T::zero();
    for j in 1..=SAMPLES {
        let next = f.q.eval(z0 + (z1 - z0) * (T::from_usize(j).unwrap() / n));
        variation = variation + (next - prev).norm();
        prev = next;
    }
    (variation * T::lit(0.5)).ceil().to_usize().unwrap_or(1).clamp(1, 8192)
}

/// `∫_{z0}^{z1} p e^q dζ` along the straight segment.
pub fn integrate_path<T: Real>(f: &PolyExpFunction<T>, z0: Complex<T>, z1: Complex<T>, tol: T) -> Result<Complex<T>> {
    if f.p.is_zero() || z0 == z1 {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    guard_segment(f, z0, z1)?;
    integrate_segment_split(|z| integrand(f, z), z0, z1, tol, initial_pieces(f, z0, z1))
}

/// `f(z)` by quadrature along `[0, z]`; `|error| ≤ tol·(1 + |f(z)|)`.
pub fn eval_f<T: Real>(f: &PolyExpFunction<T>, z: Complex<T>, tol: T) -> Result<Complex<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let origin = Complex::new(T::zero(), T::zero());
    // The quadrature tolerance is relative to |∫|, which is within |c| of |f|.
    let scale = T::one() + f.c.norm();
    let integral = integrate_path(f, origin, z, tol / scale)?;
    Ok(integral + f.c)
}

/// `f(z)` by quadrature in scaled form, for points where plain [`eval_f`] overflows.
///
/// The integrand is normalized by `e^{m}`, `m` the largest `Re q` sampled on `[0, z]`,
/// so the error is relative to `|f(z) − c|` once that is large.
pub fn eval_f_scaled<T: Real>(f: &PolyExpFunction<T>, z: Complex<T>, tol: T) -> Result<ScaledComplex<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let c = ScaledComplex::from_complex(f.c);
    if f.p.is_zero() {
        return Ok(c);
    }
    let n = T::from_usize(GUARD_SCAN_POINTS).unwrap();
    let shift = (0..=GUARD_SCAN_POINTS)
        .map(|j| f.q.eval(z * (T::from_usize(j).unwrap() / n)).re)
        .fold(T::zero(), |m, v| m.max(v));
    let origin = Complex::new(T::zero(), T::zero());
    let integral = integrate_segment_split(
        |w| {
            let qw = f.q.eval(w);
            let re = qw.re - shift;
            if !(re <= T::overflow_guard()) {
                return Err(overflow(qw.re, w));
            }
            Ok(f.p.eval(w) * Complex::from_polar(re.exp(), qw.im))
        },
        origin,
        z,
        tol,
        initial_pieces(f, origin, z),
    )?;
    let integral = ScaledComplex::from_complex(integral).mul(ScaledComplex::new(shift, T::zero()));
    Ok(integral.add(c))
}

/// JSON form of a [`PolyExpFunction`]: ascending `[re, im]` coefficient pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub p: Vec<[f64; 2]>,
    pub q: Vec<[f64; 2]>,
    pub c: [f64; 2],
}

impl FunctionSpec {
    pub fn to_function<T: Real>(&self) -> PolyExpFunction<T> {
        let conv = |v: &[[f64; 2]]| Polynomial::new(v.iter().map(|&[re, im]| crate::scalar::cplx(re, im)).collect());
        PolyExpFunction::new(conv(&self.p), conv(&self.q), crate::scalar::cplx(self.c[0], self.c[1]))
    }

    pub fn from_function<T: Real>(f: &PolyExpFunction<T>) -> Self {
        let conv = |p: &Polynomial<T>| p.coeffs().iter().map(|c| [c.re.to_f64_lossy(), c.im.to_f64_lossy()]).collect();
        Self { p: conv(&f.p), q: conv(&f.q), c: [f.c.re.to_f64_lossy(), f.c.im.to_f64_lossy()] }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("function spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("function spec serializes")
    }
}
