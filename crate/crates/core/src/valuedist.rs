//! Growth and counting statistics: maximum modulus, order, `n(r)`/`N(r)`, Jensen means,
//! and canonical products with zeros `n^{1/ρ}`.

use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entire::EntireFunction;
use crate::error::{Error, Result};
use crate::rootfinder::RootRecord;
use crate::scalar::Real;
use crate::sectorgeom::RaySet;

pub const MIN_CIRCLE_SAMPLES: usize = 64;
const GOLDEN_STEPS: usize = 60;
/// Largest admissible second-order tail `|z|² Σ_{n>N} a_n^{-2}`.
pub const PRODUCT_TAIL_BOUND: f64 = 1e-8;

fn circle_point<T: Real>(r: T, theta: T) -> Complex<T> {
    Complex::from_polar(r, theta)
}

/// `log max_{|z|=r} |f|`: the best of `samples` equispaced points, polished by golden section.
pub fn log_max_modulus<T: Real, F: EntireFunction<T>>(f: &F, r: T, samples: usize, tol: T) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::InvalidInput("r must be positive".into()));
    }
    if samples < MIN_CIRCLE_SAMPLES {
        return Err(Error::InvalidInput(format!("at least {MIN_CIRCLE_SAMPLES} circle samples required")));
    }
    let step = T::TAU() / T::from_usize(samples).unwrap();
    let values: Vec<T> = (0..samples)
        .into_par_iter()
        .map(|j| f.log_abs(circle_point(r, step * T::from_usize(j).unwrap()), tol))
        .collect::<Result<_>>()?;
    let (best, &top) = values
        .iter()
        .enumerate()
        .fold((0, &values[0]), |acc, (j, v)| if *v > *acc.1 { (j, v) } else { acc });
    let centre = step * T::from_usize(best).unwrap();
    let u = |theta: T| f.log_abs(circle_point(r, theta), tol);
    let g = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let (mut lo, mut hi) = (centre - step, centre + step);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (u(x1)?, u(x2)?);
    for _ in 0..GOLDEN_STEPS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = u(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = u(x1)?;
        }
    }
    Ok(top.max(f1).max(f2))
}

/// Least-squares slope of `log log M(r)` against `log r`.
pub fn order_estimate<T: Real, F: EntireFunction<T>>(f: &F, rgrid: &[T], samples: usize, tol: T) -> Result<T> {
    if rgrid.len() < 4 {
        return Err(Error::InvalidInput("order estimate needs at least 4 radii".into()));
    }
    if rgrid.windows(2).any(|w| !(w[1] > w[0])) || !(rgrid[0] > T::zero()) {
        return Err(Error::InvalidInput("radii must be positive and ascending".into()));
    }
    let log_m: Vec<T> = rgrid.iter().map(|&r| log_max_modulus(f, r, samples, tol)).collect::<Result<_>>()?;
    for (&r, &lm) in rgrid.iter().zip(&log_m) {
        if !(lm > T::one()) {
            return Err(Error::NonPositiveLogM { r: r.to_f64_lossy(), log_m: lm.to_f64_lossy() });
        }
    }
    let xs: Vec<T> = rgrid.iter().map(|r| r.ln()).collect();
    let ys: Vec<T> = log_m.iter().map(|m| m.ln()).collect();
    let n = T::from_usize(xs.len()).unwrap();
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (sxy, sxx) = xs
        .iter()
        .zip(&ys)
        .fold((T::zero(), T::zero()), |(sxy, sxx), (&x, &y)| (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx)));
    Ok(sxy / sxx)
}

/// `n(r)`, `N(r) = ∫₁ʳ n(t)/t dt`, `log M(r)` and the slack `N − log M` on a radius grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingTable<T> {
    pub radii: Vec<T>,
    pub n: Vec<usize>,
    #[serde(rename = "N")]
    pub big_n: Vec<T>,
    #[serde(rename = "logM")]
    pub log_m: Vec<T>,
    pub slack: Vec<T>,
}

/// `∫₁ʳ 1[t ≥ m]/t dt` for one point of modulus `m`.
fn counting_term<T: Real>(m: T, r: T) -> T {
    if r >= T::one() {
        if m <= r {
            r.ln() - m.max(T::one()).ln()
        } else {
            T::zero()
        }
    } else if m < T::one() {
        // −∫_r^1 1[t ≥ m]/t dt
        m.max(r).ln()
    } else {
        T::zero()
    }
}

/// `N(r)` with lower limit 1: points inside the unit disc contribute `log r`.
pub fn counting_n<T: Real>(roots: &[RootRecord<T>], r: T) -> T {
    roots
        .iter()
        .fold(T::zero(), |acc, z| acc + counting_term(z.location.norm(), r) * T::from_usize(z.multiplicity).unwrap())
}

/// `∫₀ʳ n(t)/t dt = Σ_{|z_k| < r} log(r/|z_k|)`, the quantity in Jensen's formula when `f(0) ≠ 0`.
pub fn counting_n_from_zero<T: Real>(roots: &[RootRecord<T>], r: T) -> T {
    roots.iter().filter(|z| z.location.norm() < r).fold(T::zero(), |acc, z| {
        acc + (r / z.location.norm()).ln() * T::from_usize(z.multiplicity).unwrap()
    })
}

/// Builds the counting table from a complete root list and `log M` sampled on `rgrid`.
pub fn counting_functions<T: Real>(roots: &[RootRecord<T>], log_m: &[T], rgrid: &[T]) -> Result<CountingTable<T>> {
    if log_m.len() != rgrid.len() {
        return Err(Error::InvalidInput("log M must be sampled on the radius grid".into()));
    }
    if rgrid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("radii must be ascending".into()));
    }
    let n = rgrid
        .iter()
        .map(|&r| roots.iter().filter(|z| z.location.norm() <= r).map(|z| z.multiplicity).sum())
        .collect();
    let big_n: Vec<T> = rgrid.iter().map(|&r| counting_n(roots, r)).collect();
    let slack = big_n.iter().zip(log_m).map(|(&a, &b)| a - b).collect();
    Ok(CountingTable { radii: rgrid.to_vec(), n, big_n, log_m: log_m.to_vec(), slack })
}

/// CSV with columns `r, n, N, logM, slack`.
pub fn write_counting_csv<T: Real, W: Write>(table: &CountingTable<T>, out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidInput(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "n", "N", "logM", "slack"]).map_err(io)?;
    for i in 0..table.radii.len() {
        w.write_record([
            table.radii[i].to_string(),
            table.n[i].to_string(),
            table.big_n[i].to_string(),
            table.log_m[i].to_string(),
            table.slack[i].to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(format!("csv output failed: {e}")))?;
    Ok(())
}

/// Mean of `log |f|` over `samples` equispaced points of `|z| = r`.
pub fn circle_mean_log<T: Real, F: EntireFunction<T>>(f: &F, r: T, samples: usize, tol: T) -> Result<T> {
    if samples == 0 || !(r > T::zero()) {
        return Err(Error::InvalidInput("need r > 0 and at least one sample".into()));
    }
    let step = T::TAU() / T::from_usize(samples).unwrap();
    let logs: Vec<T> = (0..samples)
        .into_par_iter()
        .map(|j| f.log_abs(circle_point(r, step * T::from_usize(j).unwrap()), tol))
        .collect::<Result<_>>()?;
    Ok(logs.iter().fold(T::zero(), |a, &v| a + v) / T::from_usize(samples).unwrap())
}

/// Both sides of Jensen's formula at one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JensenCheck<T> {
    pub r: T,
    pub circle_mean: T,
    pub log_f0: T,
    /// `N(r)` with lower limit 1.
    pub counting: T,
    /// `∫₀ʳ n(t)/t dt`.
    pub counting_from_zero: T,
}

impl<T: Real> JensenCheck<T> {
    /// `|N(r) + log|f(0)| − mean|` with the lower-limit-1 `N`.
    pub fn residual(&self) -> T {
        (self.counting + self.log_f0 - self.circle_mean).abs()
    }

    /// The same with `∫₀ʳ`, which vanishes exactly by Jensen's formula.
    pub fn residual_from_zero(&self) -> T {
        (self.counting_from_zero + self.log_f0 - self.circle_mean).abs()
    }
}

pub fn jensen_check<T: Real, F: EntireFunction<T>>(
    f: &F,
    zeros: &[RootRecord<T>],
    r: T,
    samples: usize,
    tol: T,
) -> Result<JensenCheck<T>> {
    let circle_mean = circle_mean_log(f, r, samples, tol)?;
    let log_f0 = f.log_abs(Complex::new(T::zero(), T::zero()), tol)?;
    Ok(JensenCheck {
        r,
        circle_mean,
        log_f0,
        counting: counting_n(zeros, r),
        counting_from_zero: counting_n_from_zero(zeros, r),
    })
}

/// `∏_{n≥1} (1 − z/a_n)` with `a_n = n^{1/ρ}`, `0 < ρ < 1`: the first `n_terms` factors
/// exactly, the rest through `exp(−z Σ_{n>N} 1/a_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalProduct<T> {
    pub rho: T,
    pub n_terms: usize,
}

impl<T: Real> CanonicalProduct<T> {
    pub fn new(rho: T, n_terms: usize) -> Result<Self> {
        if !(rho > T::zero() && rho < T::one()) {
            return Err(Error::InvalidInput("rho must lie in (0, 1)".into()));
        }
        if n_terms == 0 {
            return Err(Error::InvalidInput("n_terms must be positive".into()));
        }
        Ok(Self { rho, n_terms })
    }

    pub fn zero(&self, n: usize) -> T {
        T::from_usize(n).unwrap().powf(T::one() / self.rho)
    }

    pub fn zeros(&self) -> impl Iterator<Item = T> + '_ {
        (1..=self.n_terms).map(|n| self.zero(n))
    }

    /// `Σ_{n>N} n^{-s}` by Euler–Maclaurin from `N`.
    fn tail_power_sum(&self, s: T) -> T {
        let n = T::from_usize(self.n_terms).unwrap();
        let one = T::one();
        let f = n.powf(-s);
        let f1 = -s * n.powf(-s - one);
        let f3 = -s * (s + one) * (s + T::lit(2.0)) * n.powf(-s - T::lit(3.0));
        n.powf(one - s) / (s - one) - f * T::lit(0.5) - f1 / T::lit(12.0) + f3 / T::lit(720.0)
    }

    /// `Σ_{n>N} 1/a_n`.
    pub fn tail_sum(&self) -> T {
        self.tail_power_sum(T::one() / self.rho)
    }

    /// `|z|² Σ_{n>N} 1/a_n²`, the size of the neglected second-order tail terms.
    pub fn tail_bound(&self, z: Complex<T>) -> T {
        z.norm_sqr() * self.tail_power_sum(T::lit(2.0) / self.rho)
    }

    fn check_tail(&self, z: Complex<T>) -> Result<()> {
        let bound = self.tail_bound(z);
        if !(bound < T::lit(PRODUCT_TAIL_BOUND)) {
            return Err(Error::TailTooLarge { bound: bound.to_f64_lossy(), modulus: z.norm().to_f64_lossy() });
        }
        Ok(())
    }

    /// Largest `|z|` the current number of factors supports.
    pub fn r_max(&self) -> T {
        (T::lit(PRODUCT_TAIL_BOUND) / self.tail_power_sum(T::lit(2.0) / self.rho)).sqrt()
    }

    /// Nearest-zero split: `(k, ∏_{n≠k} (1 − z/a_n), Σ_{n≠k} 1/(z − a_n))`.
    fn split(&self, z: Complex<T>) -> (usize, Complex<T>, Complex<T>) {
        let one = Complex::new(T::one(), T::zero());
        let k = if z.re <= T::one() {
            1
        } else {
            let guess = z.re.powf(self.rho).round().to_usize().unwrap_or(1);
            let lo = guess.saturating_sub(1).max(1);
            let hi = (guess + 1).min(self.n_terms);
            (lo..=hi.max(lo))
                .min_by(|&i, &j| {
                    let (di, dj) = ((z - self.zero(i)).norm(), (z - self.zero(j)).norm());
                    di.partial_cmp(&dj).unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(1)
        };
        let mut prod = one;
        let mut logd = Complex::new(T::zero(), T::zero());
        for n in 1..=self.n_terms {
            if n == k {
                continue;
            }
            let a = self.zero(n);
            prod = prod * (one - z / a);
            logd = logd + one / (z - a);
        }
        (k, prod, logd)
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.check_tail(z)?;
        let (k, rest, _) = self.split(z);
        let ak = self.zero(k);
        let tail = (-z * self.tail_sum()).exp();
        Ok((Complex::new(T::one(), T::zero()) - z / ak) * rest * tail)
    }

    pub fn eval_derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.check_tail(z)?;
        let one = Complex::new(T::one(), T::zero());
        let (k, rest, logd) = self.split(z);
        let ak = self.zero(k);
        let s = self.tail_sum();
        let tail = (-z * s).exp();
        let factor = one - z / ak;
        Ok(tail * rest * (-one / ak + factor * (logd - s)))
    }
}

impl<T: Real> EntireFunction<T> for CanonicalProduct<T> {
    fn value(&self, z: Complex<T>, _tol: T) -> Result<Complex<T>> {
        self.eval(z)
    }

    fn derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.eval_derivative(z)
    }
}

/// `{±π(1 − 1/(2ρ))}`: the directions the literature gives for 1-points of the product.
pub fn canonical_one_point_rays<T: Real>(rho: T) -> Result<RaySet<T>> {
    if !(rho > T::zero() && rho < T::one()) {
        return Err(Error::InvalidInput("rho must lie in (0, 1)".into()));
    }
    let phi = T::PI() * (T::one() - T::one() / (rho + rho));
    Ok(RaySet::new([phi, -phi]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::TargetedFunction;
    use crate::builtin::{example1, example2, exponential};
    use crate::polyexp::{PolyExpFunction, Polynomial};
    use crate::rootfinder::RootRecord;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    type C = Complex<f64>;

    fn growth(f: &PolyExpFunction<f64>) -> TargetedFunction<f64> {
        TargetedFunction::with_default_snap(f, C::new(0.0, 0.0)).unwrap()
    }

    fn record(z: C) -> RootRecord<f64> {
        RootRecord { location: z, target: C::new(0.0, 0.0), residual: 0.0, multiplicity: 1, box_certificate: None, cluster: false }
    }

    #[test]
    fn max_modulus_examples() {
        let e = growth(&exponential());
        assert!((log_max_modulus(&e, 10.0, 64, 1e-13).unwrap() - 10.0).abs() < 1e-6);
        let e1 = growth(&example1());
        let ratio = log_max_modulus(&e1, 8.0, 256, 1e-12).unwrap() / 64.0;
        assert!((ratio - 1.0).abs() < 0.15, "{ratio}");
        let c = PolyExpFunction::new(Polynomial::zero(), Polynomial::from_real(&[0.0, 1.0]), C::new(3.0, -4.0));
        assert!((log_max_modulus(&growth(&c), 2.0, 64, 1e-12).unwrap() - 5.0f64.ln()).abs() < 1e-14);
        assert!(log_max_modulus(&growth(&c), 2.0, 63, 1e-12).is_err());
    }

    #[test]
    fn orders() {
        let grid = [4.0, 5.6, 8.0, 11.0];
        let o = order_estimate(&growth(&exponential()), &grid, 128, 1e-12).unwrap();
        assert!((o - 1.0).abs() < 0.05, "{o}");
        let o = order_estimate(&growth(&example1()), &grid, 256, 1e-12).unwrap();
        assert!((o - 2.0).abs() < 0.1, "{o}");
        let o = order_estimate(&growth(&example2()), &grid, 256, 1e-12).unwrap();
        assert!((o - 3.0).abs() < 0.15, "{o}");
        let small = [0.1, 0.2, 0.4, 0.8];
        assert!(matches!(order_estimate(&growth(&exponential()), &small, 64, 1e-12), Err(Error::NonPositiveLogM { .. })));
    }

    #[test]
    fn counting_examples() {
        let roots: Vec<_> = [1.0, 4.0, 9.0].iter().map(|&m| record(C::new(m, 0.0))).collect();
        let t = counting_functions(&roots, &[0.0, 0.0], &[5.0, 10.0]).unwrap();
        assert_eq!(t.n, vec![2, 3]);
        let expect = 10f64.ln() * 3.0 - 4f64.ln() - 9f64.ln();
        assert!((t.big_n[1] - expect).abs() < 1e-14);
        let t = counting_functions::<f64>(&[], &[1.0, 2.0], &[2.0, 3.0]).unwrap();
        assert!(t.big_n.iter().all(|&n| n == 0.0));
        assert!(t.slack.iter().all(|&s| s <= 0.0));
    }

    #[test]
    fn counting_inside_unit_disc() {
        // A point of modulus 1/2 contributes log r for r ≥ 1 and log max(r, 1/2) below.
        let roots = [record(C::new(0.0, 0.5))];
        assert!((counting_n(&roots, 3.0) - 3f64.ln()).abs() < 1e-15);
        assert!((counting_n(&roots, 0.7) - 0.7f64.ln()).abs() < 1e-15);
        assert!((counting_n(&roots, 0.2) - 0.5f64.ln()).abs() < 1e-15);
        assert!((counting_n_from_zero(&roots, 3.0) - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn jensen_for_polynomial() {
        // f = z² − 1 (p = 2t, q = 0, c = −1): zeros ±1, f(0) = −1.
        let f = PolyExpFunction::new(Polynomial::from_real(&[0.0, 2.0]), Polynomial::zero(), C::new(-1.0, 0.0));
        let zeros = [record(C::new(1.0, 0.0)), record(C::new(-1.0, 0.0))];
        let j = jensen_check(&f, &zeros, 2.5, 4096, 1e-14).unwrap();
        assert!(j.residual_from_zero() < 1e-10, "{j:?}");
        assert!(j.residual() < 1e-10);
    }

    #[test]
    fn product_examples() {
        let p = CanonicalProduct::new(0.5, 20_000).unwrap();
        let v = p.eval(C::new(-1.0, 0.0)).unwrap();
        let oracle = PI.sinh() / PI;
        assert!((v.re - oracle).abs() < 1e-6 * oracle && v.im.abs() < 1e-12);
        assert_eq!(p.eval(C::new(0.0, 0.0)).unwrap(), C::new(1.0, 0.0));
        assert_eq!(p.eval(C::new(1.0, 0.0)).unwrap().norm(), 0.0);
        // sin(π√z)/(π√z) away from the real axis as well.
        let z = C::new(3.0, 2.0);
        let w = z.sqrt() * PI;
        let oracle = w.sin() / w;
        assert!((p.eval(z).unwrap() - oracle).norm() < 1e-6 * oracle.norm());
    }

    #[test]
    fn product_derivative_matches_difference() {
        let p = CanonicalProduct::new(1.0 / 3.0, 400).unwrap();
        for z in [C::new(5.0, 3.0), C::new(8.0, 0.0), C::new(-20.0, 7.0)] {
            let h = 1e-6;
            let fd = (p.eval(z + h).unwrap() - p.eval(z - h).unwrap()) / (2.0 * h);
            let d = p.eval_derivative(z).unwrap();
            assert!((fd - d).norm() < 1e-6 * (1.0 + d.norm()), "{z}: {fd} vs {d}");
        }
    }

    #[test]
    fn product_tail_guard() {
        let p = CanonicalProduct::new(0.5, 10).unwrap();
        assert!(matches!(p.eval(C::new(50.0, 0.0)), Err(Error::TailTooLarge { .. })));
        assert!(p.r_max() < 50.0);
        assert!(CanonicalProduct::new(1.0, 10).is_err());
    }

    #[test]
    fn product_order() {
        let p = CanonicalProduct::<f64>::new(1.0 / 3.0, 2000).unwrap();
        let o = order_estimate(&p, &[50.0, 100.0, 200.0, 400.0, 800.0], 256, 1e-12).unwrap();
        assert!((o - 1.0 / 3.0).abs() < 0.1, "{o}");
    }

    #[test]
    fn one_point_rays() {
        let r = canonical_one_point_rays(1.0 / 3.0).unwrap();
        assert!(r.approx_eq(&RaySet::new([FRAC_PI_2, 3.0 * FRAC_PI_2]), 1e-12));
        assert_eq!(canonical_one_point_rays(0.5).unwrap().len(), 1);
        let r = canonical_one_point_rays(0.75).unwrap();
        assert!(r.approx_eq(&RaySet::new([PI / 3.0, -PI / 3.0]), 1e-12));
    }

    proptest! {
        #[test]
        fn counting_monotone(moduli in prop::collection::vec(0.05f64..20.0, 0..12), mut grid in prop::collection::vec(0.1f64..25.0, 2..8)) {
            grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
            grid.dedup();
            prop_assume!(grid.len() >= 2);
            let roots: Vec<_> = moduli.iter().map(|&m| record(C::from_polar(m, m * 7.0))).collect();
            let t = counting_functions(&roots, &vec![0.0; grid.len()], &grid).unwrap();
            for w in t.n.windows(2) { prop_assert!(w[1] >= w[0]); }
            for w in t.big_n.windows(2) { prop_assert!(w[1] >= w[0] - 1e-12); }
        }
    }
}
