//! Closed sectors with vertex 0, ray sets, and the minimal cone of a ray set.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{angular_distance, arg_of, wrap_2pi, Real};

/// Absolute tolerance for every angular comparison.
pub const ANGLE_TOL: f64 = 1e-12;

/// `{z : |wrap(arg z − bisector)| ≤ half_opening} ∪ {0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector<T> {
    pub bisector: T,
    pub half_opening: T,
}

impl<T: Real> Sector<T> {
    pub fn new(bisector: T, half_opening: T) -> Result<Self> {
        if !(half_opening >= T::zero() && half_opening <= T::PI()) {
            return Err(Error::InvalidInput("half_opening must lie in [0, π]".into()));
        }
        Ok(Self { bisector: wrap_2pi(bisector), half_opening })
    }

    /// Closed half-plane whose inward normal points along `bisector`.
    pub fn half_plane(bisector: T) -> Self {
        Self { bisector: wrap_2pi(bisector), half_opening: T::FRAC_PI_2() }
    }

    pub fn opening(&self) -> T {
        self.half_opening + self.half_opening
    }

    pub fn is_full_plane(&self) -> bool {
        self.half_opening >= T::PI() - T::lit(ANGLE_TOL)
    }

    pub fn contains_angle(&self, theta: T) -> bool {
        angular_distance(theta, self.bisector) <= self.half_opening + T::lit(ANGLE_TOL)
    }

    pub fn rotated(&self, by: T) -> Self {
        Self { bisector: wrap_2pi(self.bisector + by), half_opening: self.half_opening }
    }
}

/// Closed-sector membership; the vertex belongs to every sector.
pub fn contains<T: Real>(s: &Sector<T>, z: Complex<T>) -> bool {
    if z.re == T::zero() && z.im == T::zero() {
        return true;
    }
    s.contains_angle(arg_of(z))
}

/// Whether two closed sectors meet only at the vertex.
pub fn separated<T: Real>(s0: &Sector<T>, s1: &Sector<T>) -> bool {
    angular_distance(s0.bisector, s1.bisector) - (s0.half_opening + s1.half_opening) > T::lit(ANGLE_TOL)
}

/// Sorted, deduplicated directions in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RaySet<T> {
    angles: Vec<T>,
}

impl<T: Real> RaySet<T> {
    pub fn new(angles: impl IntoIterator<Item = T>) -> Self {
        let mut v: Vec<T> = angles.into_iter().map(wrap_2pi).collect();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
        let tol = T::lit(ANGLE_TOL);
        let mut out: Vec<T> = Vec::with_capacity(v.len());
        for a in v {
            if out.last().is_none_or(|&b| a - b > tol) {
                out.push(a);
            }
        }
        if out.len() > 1 && out[0] + T::TAU() - *out.last().unwrap() <= tol {
            out.pop();
        }
        Self { angles: out }
    }

    pub fn empty() -> Self {
        Self { angles: Vec::new() }
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.angles.iter().chain(other.angles.iter()).copied())
    }

    pub fn rotated(&self, by: T) -> Self {
        Self::new(self.angles.iter().map(|&a| a + by))
    }

    /// Angular agreement with another set, ray by ray.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.len() == other.len()
            && self.angles.iter().zip(&other.angles).all(|(&a, &b)| angular_distance(a, b) <= tol)
    }

    /// Circular gaps: `gaps()[i]` runs from `angles[i]` counterclockwise to the next ray.
    pub fn gaps(&self) -> Vec<T> {
        let n = self.angles.len();
        (0..n)
            .map(|i| {
                if n == 1 {
                    T::TAU()
                } else if i + 1 < n {
                    self.angles[i + 1] - self.angles[i]
                } else {
                    self.angles[0] + T::TAU() - self.angles[i]
                }
            })
            .collect()
    }
}

/// The closed sector obtained by removing one gap `index` of the ray set.
pub(crate) fn cone_excluding_gap<T: Real>(rays: &RaySet<T>, index: usize) -> Sector<T> {
    let n = rays.len();
    let gap = rays.gaps()[index];
    let start = rays.angles()[(index + 1) % n];
    let opening = (T::TAU() - gap).max(T::zero());
    let half = opening * T::lit(0.5);
    Sector { bisector: wrap_2pi(start + half), half_opening: half }
}

/// Smallest closed sector containing every ray: the complement of the largest gap.
/// Ties go to the gap that starts at the smallest angle.
pub fn minimal_cone<T: Real>(rays: &RaySet<T>) -> Result<Sector<T>> {
    if rays.is_empty() {
        return Err(Error::EmptyRaySet);
    }
    let gaps = rays.gaps();
    let tol = T::lit(ANGLE_TOL);
    let mut best = 0;
    for (i, &g) in gaps.iter().enumerate() {
        if g > gaps[best] + tol {
            best = i;
        }
    }
    Ok(cone_excluding_gap(rays, best))
}

/// Points split by modulus and by membership in a sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorReport<T> {
    pub sector: Sector<T>,
    pub r0: T,
    pub inner: Vec<Complex<T>>,
    pub inside: Vec<Complex<T>>,
    pub outside: Vec<Complex<T>>,
}

impl<T: Real> SectorReport<T> {
    /// No point with `|z| ≥ r0` falls outside the sector.
    pub fn holds(&self) -> bool {
        self.outside.is_empty()
    }
}

/// Classifies `points` against `s`, ignoring those with `|z| < r0`.
pub fn sector_report<T: Real>(points: &[Complex<T>], s: &Sector<T>, r0: T) -> Result<SectorReport<T>> {
    if !(r0 > T::zero()) {
        return Err(Error::InvalidInput("r0 must be positive".into()));
    }
    let mut report = SectorReport { sector: *s, r0, inner: Vec::new(), inside: Vec::new(), outside: Vec::new() };
    for &z in points {
        if z.norm() < r0 {
            report.inner.push(z);
        } else if contains(s, z) {
            report.inside.push(z);
        } else {
            report.outside.push(z);
        }
    }
    Ok(report)
}
