//! The rational kernel `K(x) = x²(β + x²)/(1 + 2βx² + x⁴)` and the closed form of
//! `∫₀^∞ K(s) s^{−2−δ} ds`, checked against quadrature.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::contour::integrate_segment;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Parameters derived from the sector half-width `eps` and the exponent `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams<T> {
    pub eps: T,
    pub alpha: T,
    pub beta: T,
    pub delta: T,
    pub gamma: T,
    pub c1: T,
}

impl<T: Real> KernelParams<T> {
    /// `eps ∈ (0, π/2]` (the right end is the `α = 1` limit), `delta ∈ (0, 1)`.
    pub fn new(eps: T, delta: T) -> Result<Self> {
        if !(eps > T::zero() && eps <= T::FRAC_PI_2()) {
            return Err(Error::InvalidInput("eps must lie in (0, π/2]".into()));
        }
        if !(delta > T::zero() && delta < T::one()) {
            return Err(Error::InvalidInput("delta must lie in (0, 1)".into()));
        }
        let alpha = (T::FRAC_PI_2() - eps).cos();
        let two = T::lit(2.0);
        let beta = two * alpha * alpha - T::one();
        let gamma = (T::one() + delta) / two;
        let c1 = T::one() / (T::lit(4.0) * alpha * (T::one() - alpha * alpha).sqrt());
        Ok(Self { eps, alpha, beta, delta, gamma, c1 })
    }
}

pub fn kernel_k<T: Real>(x: T, p: &KernelParams<T>) -> T {
    let x2 = x * x;
    x2 * (p.beta + x2) / (T::one() + T::lit(2.0) * p.beta * x2 + x2 * x2)
}

/// `π/(2 sin πγ) · cos(γ(π − 2ε))`.
pub fn kernel_integral_residue<T: Real>(p: &KernelParams<T>) -> T {
    T::PI() / (T::lit(2.0) * (T::PI() * p.gamma).sin()) * (p.gamma * (T::PI() - p.eps - p.eps)).cos()
}

fn real_integral<T: Real>(g: impl Fn(T) -> T, tol: T) -> Result<T> {
    let v = integrate_segment(
        |u: Complex<T>| Ok(Complex::new(g(u.re), T::zero())),
        Complex::new(T::zero(), T::zero()),
        Complex::new(T::one(), T::zero()),
        tol,
    )?;
    Ok(v.re)
}

/// `½∫₀^∞ x^{−γ}(x + β)/(1 + 2βx + x²) dx`, split at 1 with both endpoint singularities
/// removed by power substitutions (`x = u^{1/(1−γ)}` below 1, `1/x = u^{1/γ}` above).
pub fn kernel_integral_quadrature<T: Real>(p: &KernelParams<T>, tol: T) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let (b, g) = (p.beta, p.gamma);
    let two = T::lit(2.0);
    let rational = |x: T, num: T| num / (T::one() + two * b * x + x * x);
    // Each half is O(1); the mixed criterion then keeps the sum within tol.
    let local = tol * T::lit(0.1);
    let k = T::one() / (T::one() - g);
    let head = real_integral(
        |u| {
            let x = u.powf(k);
            k * rational(x, x + b)
        },
        local,
    )?;
    let tail = real_integral(
        |u| {
            let y = u.powf(T::one() / g);
            rational(y, T::one() + b * y) / g
        },
        local,
    )?;
    Ok((head + tail) / two)
}

/// Default `ε` values of the identity check.
pub const EPS_GRID: [f64; 4] = [0.2, 0.5, 1.0, 1.4];
/// Default `δ` values of the identity check.
pub const DELTA_GRID: [f64; 4] = [0.05, 0.1, 0.3, 0.6];

/// The 16 pairs `EPS_GRID × DELTA_GRID`.
pub fn kernel_params_grid<T: Real>() -> Result<Vec<KernelParams<T>>> {
    EPS_GRID
        .iter()
        .flat_map(|&e| DELTA_GRID.iter().map(move |&d| KernelParams::new(T::lit(e), T::lit(d))))
        .collect()
}

/// Closed form against quadrature for one parameter pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport<T> {
    pub eps: T,
    pub delta: T,
    pub residue: T,
    pub quadrature: T,
    pub abs_diff: T,
}

pub fn kernel_report<T: Real>(p: &KernelParams<T>, tol: T) -> Result<KernelReport<T>> {
    let residue = kernel_integral_residue(p);
    let quadrature = kernel_integral_quadrature(p, tol)?;
    Ok(KernelReport { eps: p.eps, delta: p.delta, residue, quadrature, abs_diff: (residue - quadrature).abs() })
}

/// A point where one of the kernel bounds fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundWitness<T> {
    pub bound: String,
    pub x: T,
    pub value: T,
    pub limit: T,
}

/// Pointwise check of `|K(x)| ≤ c₁x²` on the whole grid and of `|K(x)| ≤ 4x²/(2 + x⁴)` for `x ≥ 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport<T> {
    /// Smallest `limit − |K|` for the quadratic bound.
    pub min_slack_quadratic: T,
    /// Same for the `x ≥ 2` bound; `None` if the grid has no such point.
    pub min_slack_decay: Option<T>,
    pub violations: Vec<BoundWitness<T>>,
}

impl<T: Real> BoundsReport<T> {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// The first violation as an error.
    pub fn into_result(self) -> Result<Self> {
        match self.violations.first() {
            None => Ok(self),
            Some(w) => Err(Error::BoundViolated {
                bound: if w.bound == "quadratic" { "quadratic" } else { "decay" },
                x: w.x.to_f64_lossy(),
                value: w.value.to_f64_lossy(),
                limit: w.limit.to_f64_lossy(),
            }),
        }
    }
}

pub fn kernel_bounds_check<T: Real>(p: &KernelParams<T>, grid: &[T]) -> Result<BoundsReport<T>> {
    if grid.iter().any(|&x| !(x >= T::zero())) {
        return Err(Error::InvalidInput("grid points must be nonnegative".into()));
    }
    let two = T::lit(2.0);
    // Relative rounding allowance so that equality cases are not flagged.
    let slop = |v: T| T::epsilon() * T::lit(16.0) * (T::one() + v);
    let mut report = BoundsReport { min_slack_quadratic: T::infinity(), min_slack_decay: None, violations: Vec::new() };
    for &x in grid {
        let k = kernel_k(x, p).abs();
        let quad = p.c1 * x * x;
        report.min_slack_quadratic = report.min_slack_quadratic.min(quad - k);
        if k > quad + slop(quad) {
            report.violations.push(BoundWitness { bound: "quadratic".into(), x, value: k, limit: quad });
        }
        if x >= two {
            let x2 = x * x;
            let decay = T::lit(4.0) * x2 / (two + x2 * x2);
            let s = decay - k;
            report.min_slack_decay = Some(report.min_slack_decay.map_or(s, |m: T| m.min(s)));
            if k > decay + slop(decay) {
                report.violations.push(BoundWitness { bound: "decay".into(), x, value: k, limit: decay });
            }
        }
    }
    Ok(report)
}
