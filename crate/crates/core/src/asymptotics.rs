//! Critical rays `φ_k`, asymptotic values `a_k`, and the first-order approximation
//! `f(z) ≈ a_k + (p(z)/q′(z)) e^{q(z)}` away from the origin.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::integrate_segment_split;
use crate::entire::EntireFunction;
use crate::error::{Error, Result};
use crate::polyexp::{eval_f, eval_f_prime, initial_pieces, integrate_path, eval_scaled_exp, PolyExpFunction, ScaledComplex};
use crate::scalar::{angular_distance, arg_of, wrap_2pi, Real};
use crate::sectorgeom::RaySet;

/// Largest radius searched for a tail bound below `tol/10`.
pub const R_MAX: f64 = 50.0;
const R_STEP: f64 = 0.25;

/// Rays, limits along them, and the accuracy the limits carry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticData<T> {
    pub d: usize,
    pub leading: Complex<T>,
    pub rays: Vec<T>,
    pub values: Vec<Complex<T>>,
    pub value_tol: T,
}

impl<T: Real> AsymptoticData<T> {
    /// Index of the critical ray closest to `arg z`.
    pub fn nearest_ray(&self, z: Complex<T>) -> usize {
        let theta = arg_of(z);
        let mut best = 0;
        for k in 1..self.rays.len() {
            if angular_distance(theta, self.rays[k]) < angular_distance(theta, self.rays[best]) {
                best = k;
            }
        }
        best
    }
}

fn leading<T: Real>(f: &PolyExpFunction<T>) -> Result<(usize, Complex<T>)> {
    match f.leading_coefficient() {
        Some(a) => Ok((f.d(), a)),
        None => Err(Error::DegreeZero),
    }
}

/// `φ_k = ((2k − 1)π − arg A)/d mod 2π` for `k = 1..d`, in index order.
pub fn critical_ray_angles<T: Real>(d: usize, arg_a: T) -> Vec<T> {
    let dd = T::from_usize(d).unwrap();
    (1..=d)
        .map(|k| {
            let k = T::from_usize(2 * k - 1).unwrap();
            wrap_2pi((k * T::PI() - arg_a) / dd)
        })
        .collect()
}

/// The critical rays of `f`, sorted ascending.
pub fn critical_rays<T: Real>(f: &PolyExpFunction<T>) -> Result<Vec<T>> {
    let (d, a) = leading(f)?;
    let mut rays = critical_ray_angles(d, arg_of(a));
    rays.sort_by(|x, y| x.partial_cmp(y).expect("finite rays"));
    Ok(rays)
}

/// Both boundary rays `φ_k ± π/(2d)` of every decay sector `k` selected by `keep`.
///
/// This is the single adjacency rule: a-points accumulate on the boundary of sector `k`
/// exactly when `a ≠ a_k`.
pub fn boundary_rays<T: Real>(rays: &[T], keep: impl Fn(usize) -> bool) -> RaySet<T> {
    if rays.is_empty() {
        return RaySet::empty();
    }
    let offset = T::PI() / T::from_usize(2 * rays.len()).unwrap();
    RaySet::new(
        rays.iter()
            .enumerate()
            .filter(|(k, _)| keep(*k))
            .flat_map(|(_, &phi)| [phi - offset, phi + offset]),
    )
}

/// `|p(z)/q′(z)|·e^{Re q(z)}`, the size of the first-order remainder.
fn tail_bound<T: Real>(f: &PolyExpFunction<T>, z: Complex<T>) -> Option<T> {
    let dq = f.q_prime().eval(z);
    if dq.norm() == T::zero() {
        return None;
    }
    let ratio = f.p.eval(z).norm() / dq.norm();
    Some(ratio * f.q.eval(z).re.exp())
}

/// `a_k = c + ∫₀^{R e^{iφ_k}} p e^q`, with `R` the first radius where the tail is below `tol/10`.
pub fn asymptotic_values<T: Real>(f: &PolyExpFunction<T>, tol: T) -> Result<AsymptoticData<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let (d, a) = leading(f)?;
    let rays = critical_rays(f)?;
    let tenth = tol / T::lit(10.0);
    let steps = (R_MAX / R_STEP).round() as usize;
    let values = rays
        .par_iter()
        .map(|&phi| {
            let dir = Complex::from_polar(T::one(), phi);
            let radius = (1..=steps)
                .map(|j| T::lit(R_STEP * j as f64))
                .find(|&r| tail_bound(f, dir * r).is_some_and(|b| b < tenth))
                .ok_or_else(|| Error::ToleranceNotMet {
                    tol: tol.to_f64_lossy(),
                    context: format!("no radius up to {R_MAX} gives a tail below tol/10 on ray {}", phi.to_f64_lossy()),
                })?;
            eval_f(f, dir * radius, tenth)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticData { d, leading: a, rays, values, value_tol: tol })
}

/// `a_k + (p(z)/q′(z)) e^{q(z)}` for the ray `k` nearest to `arg z`; valid where plain `f` overflows.
pub fn asymptotic_approx<T: Real>(
    f: &PolyExpFunction<T>,
    z: Complex<T>,
    data: &AsymptoticData<T>,
) -> Result<(ScaledComplex<T>, usize)> {
    let k = data.nearest_ray(z);
    let ak = ScaledComplex::from_complex(data.values[k]);
    if f.p.is_zero() {
        return Ok((ak, k));
    }
    let dq = f.q_prime().eval(z);
    let guard = T::lit(1e-12) * (T::one() + z.norm()).powi(data.d as i32 - 1);
    if dq.norm() < guard {
        return Err(Error::NearCriticalZero { at_re: z.re.to_f64_lossy(), at_im: z.im.to_f64_lossy() });
    }
    let remainder = ScaledComplex::from_complex(f.p.eval(z))
        .div(ScaledComplex::from_complex(dq))
        .mul(eval_scaled_exp(&f.q, z));
    Ok((ak.add(remainder), k))
}

/// Rays `φ_k ± π/(2d)` at which `target`-points accumulate: those bordering a
/// decay sector whose limit `a_k` differs from `target` by more than `tol`.
pub fn accumulation_rays_analytic<T: Real>(data: &AsymptoticData<T>, target: Complex<T>, tol: T) -> RaySet<T> {
    boundary_rays(&data.rays, |k| (data.values[k] - target).norm() > tol)
}

/// Below this `Re q(z)`, a point of a decay sector is evaluated through its tail integral.
const TAIL_THRESHOLD: f64 = -1.0;
/// The tail integral stops once `Re q` has dropped this far below `Re q(z)`.
const TAIL_DEPTH: f64 = 45.0;

/// `g = f − a`, evaluated without cancellation where `f` is close to an asymptotic value.
///
/// Deep in the decay sector of `φ_k`, `f(z) = a_k − ∫_z^{∞·z} p e^q`; the integral is
/// computed relative to `e^{q(z)}`, so `g` keeps its relative accuracy as `f → a_k`.
/// A limit within `snap` of `a` is taken to equal `a` exactly.
#[derive(Debug, Clone)]
pub struct TargetedFunction<T> {
    pub f: PolyExpFunction<T>,
    pub target: Complex<T>,
    data: Option<AsymptoticData<T>>,
    /// `a_k − a` per ray, zeroed where snapped.
    offsets: Vec<Complex<T>>,
}

impl<T: Real> TargetedFunction<T> {
    pub fn new(f: &PolyExpFunction<T>, target: Complex<T>, snap: T) -> Result<Self> {
        let data = match f.leading_coefficient() {
            Some(_) if !f.p.is_zero() => Some(asymptotic_values(f, snap * T::lit(0.01))?),
            _ => None,
        };
        let offsets = data
            .iter()
            .flat_map(|d| d.values.iter())
            .map(|&v| if (v - target).norm() <= snap { Complex::new(T::zero(), T::zero()) } else { v - target })
            .collect();
        Ok(Self { f: f.clone(), target, data, offsets })
    }

    /// Default snap: limits closer to `a` than `1e-10` are treated as equal to it.
    pub fn with_default_snap(f: &PolyExpFunction<T>, target: Complex<T>) -> Result<Self> {
        Self::new(f, target, T::lit(1e-10).max(T::epsilon() * T::lit(1e3)))
    }

    pub fn asymptotics(&self) -> Option<&AsymptoticData<T>> {
        self.data.as_ref()
    }

    fn tail(&self, z: Complex<T>, tol: T) -> Option<Result<Complex<T>>> {
        let data = self.data.as_ref()?;
        let qz = self.f.q.eval(z);
        if !(qz.re < T::lit(TAIL_THRESHOLD)) {
            return None;
        }
        let k = data.nearest_ray(z);
        let half = T::PI() / T::from_usize(2 * data.d).unwrap();
        if angular_distance(arg_of(z), data.rays[k]) >= half {
            return None;
        }
        // Walk outward until the integrand is negligible; Re q must not climb on the way.
        let mut s = T::one();
        let far = loop {
            s = s * T::lit(1.25);
            if s > T::lit(1e3) {
                return None;
            }
            let far = z * s;
            let rise = self.f.q.eval(far).re - qz.re;
            if rise > T::lit(30.0) {
                return None;
            }
            if rise < -T::lit(TAIL_DEPTH) {
                break far;
            }
        };
        let integral = integrate_segment_split(
            |w| {
                let e = self.f.q.eval(w) - qz;
                if !(e.re <= T::overflow_guard()) {
                    return Err(Error::OverflowRegion {
                        re_q: e.re.to_f64_lossy(),
                        at_re: w.re.to_f64_lossy(),
                        at_im: w.im.to_f64_lossy(),
                    });
                }
                Ok(self.f.p.eval(w) * e.exp())
            },
            z,
            far,
            tol,
            initial_pieces(&self.f, z, far),
        );
        Some(integral.map(|i| self.offsets[k] - i * qz.exp()))
    }
}

impl<T: Real> EntireFunction<T> for TargetedFunction<T> {
    fn value(&self, z: Complex<T>, tol: T) -> Result<Complex<T>> {
        match self.tail(z, tol) {
            Some(v) => v,
            None => Ok(eval_f(&self.f, z, tol)? - self.target),
        }
    }

    fn derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        eval_f_prime(&self.f, z).to_complex().ok_or(Error::OverflowRegion {
            re_q: self.f.q.eval(z).re.to_f64_lossy(),
            at_re: z.re.to_f64_lossy(),
            at_im: z.im.to_f64_lossy(),
        })
    }

    fn increment(&self, z0: Complex<T>, z1: Complex<T>, tol: T) -> Result<Complex<T>> {
        integrate_path(&self.f, z0, z1, tol)
    }

    /// Falls back to the first-order asymptotics where `f` overflows; `a` is negligible there.
    fn log_abs(&self, z: Complex<T>, tol: T) -> Result<T> {
        match self.value(z, tol) {
            Ok(v) => Ok(v.norm().ln()),
            Err(Error::OverflowRegion { .. }) if self.data.is_some() => {
                Ok(asymptotic_approx(&self.f, z, self.data.as_ref().unwrap())?.0.logmag)
            }
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{example1, example2, exponential};
    use crate::polyexp::{eval_f_scaled, Polynomial};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    type C = Complex<f64>;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn rays_of_examples() {
        let r = critical_rays(&example1::<f64>()).unwrap();
        assert!(close(r[0], 0.0) && close(r[1], PI));
        let r = critical_rays(&example2::<f64>()).unwrap();
        assert!(close(r[0], 0.0) && close(r[1], 2.0 * PI / 3.0) && close(r[2], 4.0 * PI / 3.0));
        let r = critical_rays(&exponential::<f64>()).unwrap();
        assert_eq!(r.len(), 1);
        assert!(close(r[0], PI));
    }

    #[test]
    fn degree_zero_rejected() {
        let f = PolyExpFunction::new(Polynomial::<f64>::from_real(&[1.0]), Polynomial::from_real(&[2.0]), C::new(0.0, 0.0));
        assert_eq!(critical_rays(&f), Err(Error::DegreeZero));
    }

    #[test]
    fn ray_spacing() {
        let f = PolyExpFunction::new(
            Polynomial::<f64>::from_real(&[1.0]),
            Polynomial::new(vec![C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.3, -0.7)]),
            C::new(0.0, 0.0),
        );
        let r = critical_rays(&f).unwrap();
        for w in r.windows(2) {
            assert!((w[1] - w[0] - FRAC_PI_2).abs() < 1e-12);
        }
    }

    #[test]
    fn values_of_examples() {
        let tol = 1e-10;
        let e1 = asymptotic_values(&example1::<f64>(), tol).unwrap();
        assert!((e1.values[0] - C::new(1.0, 0.0)).norm() < tol);
        assert!(e1.values[1].norm() < tol);
        let e2 = asymptotic_values(&example2::<f64>(), tol).unwrap();
        assert!((e2.values[0] - C::new(1.0, 0.0)).norm() < tol);
        assert!(e2.values[1].norm() < tol && e2.values[2].norm() < tol);
        let ex = asymptotic_values(&exponential::<f64>(), tol).unwrap();
        assert!(ex.values[0].norm() < tol);
    }

    #[test]
    fn approx_constant_function() {
        let f = PolyExpFunction::new(Polynomial::zero(), Polynomial::from_real(&[0.0, 1.0]), C::new(2.0, 1.0));
        let data = asymptotic_values(&f, 1e-10).unwrap();
        let (v, _) = asymptotic_approx(&f, C::new(7.0, 3.0), &data).unwrap();
        assert!((v.to_complex().unwrap() - C::new(2.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn approx_on_decay_ray() {
        let f = example1::<f64>();
        let data = asymptotic_values(&f, 1e-12).unwrap();
        let z = C::new(10.0, 0.0);
        let (v, k) = asymptotic_approx(&f, z, &data).unwrap();
        assert_eq!(k, 0);
        let direct = eval_f(&f, z, 1e-14).unwrap();
        assert!((v.to_complex().unwrap() - direct).norm() < 1e-12);
    }

    #[test]
    fn approx_in_growth_direction() {
        let f = example1::<f64>();
        let data = asymptotic_values(&f, 1e-12).unwrap();
        let z = C::new(0.0, 10.0);
        let (v, _) = asymptotic_approx(&f, z, &data).unwrap();
        // |p/q′| = |z|/√π, Re q = 100.
        let expect = 100.0 + (10.0 / PI.sqrt()).ln();
        assert!((v.logmag - expect).abs() < 1e-10);
        let direct = eval_f(&f, z, 1e-14).unwrap();
        assert!((v.logmag - direct.norm().ln()).abs() < 0.01);
    }

    fn relative_gap(a: ScaledComplex<f64>, b: ScaledComplex<f64>) -> f64 {
        // |a − b| / |b| = |a/b − 1|
        let q = a.div(b);
        (C::from_polar(q.logmag.exp(), q.phase) - 1.0).norm()
    }

    #[test]
    fn relative_error_is_order_one_over_z() {
        // O(1/|z|) bound: |z|·relerr stays bounded and shrinks along r = 5, 10, 20.
        for f in [example1::<f64>(), example2::<f64>()] {
            let data = asymptotic_values(&f, 1e-12).unwrap();
            let theta = data.rays[0] + PI / (2.0 * data.d as f64) + 0.2;
            let scaled: Vec<f64> = [5.0, 10.0, 20.0]
                .iter()
                .map(|&r| {
                    let z = C::from_polar(r, theta);
                    let (v, _) = asymptotic_approx(&f, z, &data).unwrap();
                    let direct = eval_f_scaled(&f, z, 1e-14).unwrap();
                    r * relative_gap(v, direct)
                })
                .collect();
            assert!(scaled[1] < scaled[0] && scaled[2] < scaled[1], "{scaled:?}");
        }
    }

    #[test]
    fn converges_along_rays() {
        for f in [example1::<f64>(), example2::<f64>()] {
            let data = asymptotic_values(&f, 1e-12).unwrap();
            for (k, &phi) in data.rays.iter().enumerate() {
                let errs: Vec<f64> = [5.0, 10.0, 20.0, 40.0]
                    .iter()
                    .map(|&r| (eval_f(&f, C::from_polar(r, phi), 1e-14).unwrap() - data.values[k]).norm())
                    .collect();
                for w in errs.windows(2) {
                    assert!(w[1] <= w[0] || w[1] < 1e-12, "ray {k}: {errs:?}");
                }
            }
        }
    }

    #[test]
    fn accumulation_rays_of_examples() {
        let tol = 1e-8;
        let e1 = asymptotic_values(&example1::<f64>(), tol).unwrap();
        let zeros = accumulation_rays_analytic(&e1, C::new(0.0, 0.0), tol);
        assert!(zeros.approx_eq(&RaySet::new([FRAC_PI_4, 7.0 * FRAC_PI_4]), 1e-12));
        let ones = accumulation_rays_analytic(&e1, C::new(1.0, 0.0), tol);
        assert!(ones.approx_eq(&RaySet::new([3.0 * FRAC_PI_4, 5.0 * FRAC_PI_4]), 1e-12));

        let e2 = asymptotic_values(&example2::<f64>(), tol).unwrap();
        let ones = accumulation_rays_analytic(&e2, C::new(1.0, 0.0), tol);
        let expect = RaySet::new([FRAC_PI_2, 5.0 * PI / 6.0, 7.0 * PI / 6.0, 3.0 * FRAC_PI_2]);
        assert!(ones.approx_eq(&expect, 1e-12));
    }

    #[test]
    fn targeted_keeps_relative_accuracy_in_decay_sector() {
        let f = example1::<f64>();
        let g = TargetedFunction::with_default_snap(&f, C::new(0.0, 0.0)).unwrap();
        // Far left, f = erfc(−z)/2 − ze^{−z²}/√π ≈ (p/q′)e^q(1 − 1/(2z²) + …).
        let z = C::new(-8.0, 0.5);
        let v = g.value(z, 1e-14).unwrap();
        let lead = z * (-z * z).exp() * (-1.0 / PI.sqrt());
        let rel = (v / lead - 1.0).norm();
        assert!(rel < 1.0 / (2.0 * 64.0) * 1.2 && rel > 1.0 / (2.0 * 64.0) * 0.8, "{rel}");
        // Away from the sector it is plain f − a.
        let w = C::new(0.3, 1.1);
        assert!((g.value(w, 1e-14).unwrap() - eval_f(&f, w, 1e-14).unwrap()).norm() < 1e-13);
        // Both representations agree where they overlap.
        let z = C::new(-1.6, 0.2);
        let plain = eval_f(&f, z, 1e-15).unwrap();
        let tail = g.value(z, 1e-15).unwrap();
        assert!((plain - tail).norm() < 1e-14, "{plain} {tail}");
    }

    #[test]
    fn no_rays_when_every_limit_is_the_target() {
        let f = PolyExpFunction::new(Polynomial::zero(), Polynomial::from_real(&[0.0, 0.0, 1.0]), C::new(0.4, 0.0));
        let data = asymptotic_values(&f, 1e-10).unwrap();
        assert!(accumulation_rays_analytic(&data, C::new(0.4, 0.0), 1e-8).is_empty());
    }
}
