//! Accumulation-ray configurations with limits in {0, 1}: which sectors could hold the
//! zeros and the 1-points, and an exhaustive check of the angle hypotheses over small degrees.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{boundary_rays, critical_ray_angles, AsymptoticData};
use crate::error::{Error, Result};
use crate::scalar::{angular_distance, arg_of, Real};
use crate::sectorgeom::{cone_excluding_gap, minimal_cone, separated, RaySet, Sector, ANGLE_TOL};

/// Largest degree `enumerate_configs` accepts.
pub const MAX_ENUM_DEGREE: usize = 12;
/// Tolerance for recognising a limit as 0 or 1.
pub const CLASSIFY_TOL: f64 = 1e-6;

/// Degree `d`, `arg A`, and the limits `a_k ∈ {0, 1}` indexed as in `φ_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccumulationConfig<T> {
    pub d: usize,
    pub arg_a: T,
    pub assignment: Vec<u8>,
}

impl<T: Real> AccumulationConfig<T> {
    pub fn new(d: usize, arg_a: T, assignment: Vec<u8>) -> Result<Self> {
        if d == 0 {
            return Err(Error::DegreeZero);
        }
        if assignment.len() != d || assignment.iter().any(|&a| a > 1) {
            return Err(Error::InvalidInput(format!("assignment must be {d} values in {{0, 1}}")));
        }
        Ok(Self { d, arg_a, assignment })
    }

    /// Reads the configuration off computed limits; `None` if some `a_k` is neither 0 nor 1.
    pub fn from_asymptotics(data: &AsymptoticData<T>) -> Option<Self> {
        let arg_a = arg_of(data.leading);
        let tol = T::lit(CLASSIFY_TOL);
        let assignment = critical_ray_angles(data.d, arg_a)
            .iter()
            .map(|&phi| {
                let j = (0..data.d).min_by(|&i, &j| {
                    angular_distance(data.rays[i], phi)
                        .partial_cmp(&angular_distance(data.rays[j], phi))
                        .unwrap_or(std::cmp::Ordering::Equal)
                })?;
                let v = data.values[j];
                if (v - Complex::new(T::one(), T::zero())).norm() <= tol {
                    Some(1)
                } else if v.norm() <= tol {
                    Some(0)
                } else {
                    None
                }
            })
            .collect::<Option<Vec<u8>>>()?;
        Some(Self { d: data.d, arg_a, assignment })
    }

    pub fn is_mixed(&self) -> bool {
        self.assignment.contains(&0) && self.assignment.contains(&1)
    }
}

/// `(zero_rays, one_rays)`: zeros accumulate on the boundary of sectors with `a_k = 1`,
/// 1-points on the boundary of sectors with `a_k = 0`.
pub fn config_rays<T: Real>(cfg: &AccumulationConfig<T>) -> (RaySet<T>, RaySet<T>) {
    let rays = critical_ray_angles(cfg.d, cfg.arg_a);
    let zeros = boundary_rays(&rays, |k| cfg.assignment[k] != 0);
    let ones = boundary_rays(&rays, |k| cfg.assignment[k] != 1);
    (zeros, ones)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityVerdict<T> {
    pub zero_rays: RaySet<T>,
    pub one_rays: RaySet<T>,
    /// Minimal cones; `None` for an empty ray set (opening reported as 0).
    pub zero_cone: Option<Sector<T>>,
    pub one_cone: Option<Sector<T>>,
    pub zero_cone_opening: T,
    pub one_cone_opening: T,
    pub disjoint: bool,
    pub theorem1_hypothesis_met: bool,
    pub theorem3_hypothesis_met: bool,
}

fn cone<T: Real>(rays: &RaySet<T>) -> Option<Sector<T>> {
    minimal_cone(rays).ok()
}

fn opening<T: Real>(s: &Option<Sector<T>>) -> T {
    s.map_or(T::zero(), |s| s.opening())
}

/// Whether some closed half-plane contains every ray of `ones` and meets `s` only at 0.
///
/// Half-planes containing the rays are exactly those whose bisector lies within
/// `π/2 − h` of the bisector of a cone of half-opening `h ≤ π/2` around them; one of
/// them avoids `s` iff that cone is separated from `s`.
fn half_plane_fits<T: Real>(ones: &RaySet<T>, s: Option<&Sector<T>>) -> bool {
    if ones.is_empty() {
        return true;
    }
    let tol = T::lit(ANGLE_TOL);
    ones.gaps().iter().enumerate().filter(|(_, &g)| g >= T::PI() - tol).any(|(i, _)| {
        let c = cone_excluding_gap(ones, i);
        match s {
            Some(s) => separated(s, &c),
            // Any thin sector opposite the half-plane will do unless the rays fill it entirely.
            None => true,
        }
    })
}

pub fn assess<T: Real>(cfg: &AccumulationConfig<T>) -> FeasibilityVerdict<T> {
    let (zero_rays, one_rays) = config_rays(cfg);
    let zero_cone = cone(&zero_rays);
    let one_cone = cone(&one_rays);
    let (z_open, o_open) = (opening(&zero_cone), opening(&one_cone));
    let disjoint = match (&zero_cone, &one_cone) {
        (Some(a), Some(b)) => separated(a, b),
        // An empty set can be given a degenerate sector away from the other cone.
        (None, Some(c)) | (Some(c), None) => !c.is_full_plane(),
        (None, None) => true,
    };
    let tol = T::lit(ANGLE_TOL);
    let theorem1_hypothesis_met =
        disjoint && z_open.min(o_open) < T::FRAC_PI_2() - tol && z_open.max(o_open) < T::PI() - tol;
    let theorem3_hypothesis_met =
        z_open < T::FRAC_PI_3() - tol && half_plane_fits(&one_rays, zero_cone.as_ref());
    FeasibilityVerdict {
        zero_rays,
        one_rays,
        zero_cone,
        one_cone,
        zero_cone_opening: z_open,
        one_cone_opening: o_open,
        disjoint,
        theorem1_hypothesis_met,
        theorem3_hypothesis_met,
    }
}

/// One failed consistency check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub d: usize,
    pub arg_a: f64,
    pub assignment: Vec<u8>,
}

/// Outcome of [`enumerate_configs`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub dmax: usize,
    pub arg_samples: usize,
    pub configs_checked: usize,
    pub theorem1_met: usize,
    pub theorem3_met: usize,
    /// Configurations of degree 2 with disjoint cones both narrower than π.
    pub d2_disjoint_openings: Vec<[f64; 2]>,
    pub violations: Vec<Counterexample>,
}

impl EnumerationReport {
    pub fn into_result(self) -> Result<Self> {
        match self.violations.first() {
            None => Ok(self),
            Some(c) => Err(Error::CounterexampleFound(format!(
                "{}: d = {}, arg A = {}, assignment {:?}",
                c.check, c.d, c.arg_a, c.assignment
            ))),
        }
    }
}

struct Tally {
    checked: usize,
    t1: usize,
    t3: usize,
    d2: Vec<[f64; 2]>,
    bad: Vec<Counterexample>,
}

impl Tally {
    fn empty() -> Self {
        Self { checked: 0, t1: 0, t3: 0, d2: Vec::new(), bad: Vec::new() }
    }

    fn merge(mut self, other: Self) -> Self {
        self.checked += other.checked;
        self.t1 += other.t1;
        self.t3 += other.t3;
        self.d2.extend(other.d2);
        self.bad.extend(other.bad);
        self
    }
}

fn check_config(cfg: &AccumulationConfig<f64>) -> Tally {
    let v = assess(cfg);
    let mut t = Tally::empty();
    t.checked = 1;
    let mut fail = |check: &str| {
        t.bad.push(Counterexample { check: check.into(), d: cfg.d, arg_a: cfg.arg_a, assignment: cfg.assignment.clone() })
    };
    let pi = std::f64::consts::PI;
    let mixed = cfg.is_mixed();
    // (i) no configuration has disjoint cones with min < π/2 and max < π.
    if v.theorem1_hypothesis_met {
        fail("theorem1_hypothesis_met");
    }
    // (ii) odd degree: a zero cone below π forces the 1-point cone to at least π.
    if cfg.d % 2 == 1 && mixed && v.zero_cone_opening < pi - 1e-9 && v.one_cone_opening < pi - 1e-9 {
        fail("odd degree with both cones below π");
    }
    // (iii) a zero cone below π/3 with a compatible half-plane only in degree 1.
    if v.theorem3_hypothesis_met && cfg.d != 1 {
        fail("theorem3_hypothesis_met with d ≥ 2");
    }
    // Every open sector wider than π/d holds a ray of one of the sets.
    if mixed {
        let all = v.zero_rays.union(&v.one_rays);
        if all.len() != 2 * cfg.d || all.gaps().iter().any(|&g| g > pi / cfg.d as f64 + 1e-9) {
            fail("mixed assignment leaves a gap wider than π/d");
        }
    }
    if cfg.d == 2 && v.disjoint && v.zero_cone.is_some() && v.one_cone.is_some() {
        let (a, b) = (v.zero_cone_opening, v.one_cone_opening);
        if a < pi - 1e-9 && b < pi - 1e-9 {
            t.d2.push([a, b]);
            if (a - pi / 2.0).abs() > 1e-9 || (b - pi / 2.0).abs() > 1e-9 {
                fail("degree 2 disjoint cones other than (π/2, π/2)");
            }
        }
    }
    // A constant assignment a ≡ v leaves no accumulation rays for the target v.
    if !mixed {
        let empty = if cfg.assignment[0] == 0 { &v.zero_rays } else { &v.one_rays };
        if !empty.is_empty() {
            fail("constant assignment produced rays for its own value");
        }
    }
    t.t1 = v.theorem1_hypothesis_met as usize;
    t.t3 = v.theorem3_hypothesis_met as usize;
    t
}

/// Every degree `d ≤ dmax`, every assignment in `{0,1}^d` and `arg A = 2πj/arg_samples`.
pub fn enumerate_configs(dmax: usize, arg_samples: usize) -> Result<EnumerationReport> {
    if dmax == 0 || dmax > MAX_ENUM_DEGREE {
        return Err(Error::InvalidInput(format!("dmax must lie in 1..={MAX_ENUM_DEGREE}")));
    }
    if arg_samples == 0 {
        return Err(Error::InvalidInput("arg_samples must be positive".into()));
    }
    let jobs: Vec<(usize, u32)> = (1..=dmax).flat_map(|d| (0..(1u32 << d)).map(move |m| (d, m))).collect();
    let tally = jobs
        .par_iter()
        .map(|&(d, mask)| {
            let assignment: Vec<u8> = (0..d).map(|k| ((mask >> k) & 1) as u8).collect();
            (0..arg_samples)
                .map(|j| {
                    let arg_a = std::f64::consts::TAU * j as f64 / arg_samples as f64;
                    check_config(&AccumulationConfig { d, arg_a, assignment: assignment.clone() })
                })
                .fold(Tally::empty(), Tally::merge)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::empty(), Tally::merge);
    Ok(EnumerationReport {
        dmax,
        arg_samples,
        configs_checked: tally.checked,
        theorem1_met: tally.t1,
        theorem3_met: tally.t3,
        d2_disjoint_openings: tally.d2,
        violations: tally.bad,
    })
}
