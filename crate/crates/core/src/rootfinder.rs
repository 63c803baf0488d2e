//! All a-points of an entire function in a rectangle: quadtree subdivision certified
//! by winding counts, then Newton with the exact derivative.

use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::TargetedFunction;
use crate::contour::{winding_number, Rect};
use crate::entire::EntireFunction;
use crate::error::{Error, Result};
use crate::polyexp::PolyExpFunction;
use crate::scalar::{arg_of, cdiv, Real};

/// Boxes deeper than this are reported as clusters.
pub const MAX_DEPTH: usize = 40;
/// Boxes with winding 1 are handed to Newton once their diameter is below this.
pub const LEAF_DIAMETER: f64 = 1e-3;
pub const JITTER_RETRIES: usize = 5;
/// Relative (to the region diameter) distance under which two roots are merged.
pub const DEDUP_TOL: f64 = 1e-8;
pub const NEWTON_MAXIT: usize = 50;

// The first entry is the plain bisection; the rest are the jitter retries.
const SPLIT_FRACTIONS: [f64; JITTER_RETRIES + 1] = [0.5, 0.51, 0.49, 0.52, 0.48, 0.53];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRecord<T> {
    pub location: Complex<T>,
    pub target: Complex<T>,
    pub residual: T,
    pub multiplicity: usize,
    /// Final box whose winding equals `multiplicity`; absent for free-standing Newton runs.
    pub box_certificate: Option<Rect<T>>,
    /// Set when subdivision bottomed out before the winding dropped to 1.
    pub cluster: bool,
}

/// Outcome of [`find_a_points`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSearch<T> {
    pub roots: Vec<RootRecord<T>>,
    /// The searched rectangle after any boundary jitter.
    pub region: Rect<T>,
    /// Winding over `region`; `None` when its boundary reaches the overflow guard.
    pub winding: Option<usize>,
    /// Area of sub-boxes dropped because `f` overflows on them.
    pub clipped_area: T,
}

impl<T: Real> RootSearch<T> {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn locations(&self) -> Vec<Complex<T>> {
        self.roots.iter().map(|r| r.location).collect()
    }
}

fn eval_tol<T: Real>(tol: T) -> T {
    (tol * T::lit(1e-3)).max(T::epsilon() * T::lit(4.0))
}

fn vanishing<T: Real>() -> T {
    T::min_positive_value() * T::lit(1e8)
}

/// Newton for an a-point of multiplicity `m`: `z ← z − m(f − a)/f′`, until `|f − a| ≤ tol`.
fn newton_m<T: Real, F: EntireFunction<T>>(
    f: &F,
    a: Complex<T>,
    z0: Complex<T>,
    m: usize,
    tol: T,
    maxit: usize,
) -> Result<(Complex<T>, T)> {
    let etol = eval_tol(tol);
    let mt = T::from_usize(m).unwrap();
    let mut z = z0;
    let mut w = f.value(z, etol)? - a;
    let mut residual = w.norm();
    for _ in 0..maxit {
        if residual <= tol {
            return Ok((z, residual));
        }
        let d = f.derivative(z)?;
        if d.norm() < vanishing() {
            return Err(Error::DerivativeVanishes { at_re: z.re.to_f64_lossy(), at_im: z.im.to_f64_lossy() });
        }
        z = z - cdiv(w, d) * mt;
        w = f.value(z, etol)? - a;
        residual = w.norm();
    }
    if residual <= tol {
        return Ok((z, residual));
    }
    Err(Error::NoConvergence { iterations: maxit, residual: residual.to_f64_lossy() })
}

/// Refines a seed by Newton's method with the exact derivative to `|f(z) − a| ≤ tol`.
pub fn newton_refine<T: Real, F: EntireFunction<T>>(
    f: &F,
    a: Complex<T>,
    z0: Complex<T>,
    tol: T,
    maxit: usize,
) -> Result<RootRecord<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let (location, residual) = newton_m(f, a, z0, 1, tol, maxit)?;
    Ok(RootRecord { location, target: a, residual, multiplicity: 1, box_certificate: None, cluster: false })
}

#[derive(Clone, Copy)]
enum Count {
    Known(usize),
    Overflow,
}

struct Search<'a, T, F> {
    f: &'a F,
    a: Complex<T>,
    tol: T,
    leaf: T,
    clip: T,
}

struct Partial<T> {
    roots: Vec<RootRecord<T>>,
    clipped: T,
}

impl<T: Real> Partial<T> {
    fn empty() -> Self {
        Self { roots: Vec::new(), clipped: T::zero() }
    }
}

impl<T: Real, F: EntireFunction<T>> Search<'_, T, F> {
    fn count(&self, rect: &Rect<T>) -> Result<Count> {
        match winding_number(self.f, self.a, rect, eval_tol(self.tol)) {
            Ok(w) => Ok(Count::Known(w.count)),
            Err(Error::OverflowRegion { .. }) => Ok(Count::Overflow),
            Err(e) => Err(e),
        }
    }

    /// Quadrants with their counts; a retry at a shifted split point follows any
    /// boundary hit or any mismatch with the parent's winding.
    fn children(&self, rect: &Rect<T>, parent: Option<usize>) -> Result<Vec<(Rect<T>, Count)>> {
        let mut last = None;
        for &frac in &SPLIT_FRACTIONS {
            let kids = rect.split(T::lit(frac), T::lit(frac));
            let counts: Result<Vec<Count>> = kids.par_iter().map(|k| self.count(k)).collect();
            match counts {
                Ok(counts) => {
                    let known: Option<usize> = counts
                        .iter()
                        .map(|c| match c {
                            Count::Known(n) => Some(*n),
                            Count::Overflow => None,
                        })
                        .sum();
                    if let (Some(p), Some(s)) = (parent, known) {
                        if p != s {
                            last = Some(Error::ToleranceNotMet {
                                tol: self.tol.to_f64_lossy(),
                                context: format!("child windings sum to {s}, parent has {p}"),
                            });
                            continue;
                        }
                    }
                    return Ok(kids.into_iter().zip(counts).collect());
                }
                Err(e @ (Error::BoundaryTooClose { .. } | Error::ToleranceNotMet { .. })) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one split attempted"))
    }

    fn newton_in(&self, rect: &Rect<T>, m: usize) -> Option<RootRecord<T>> {
        let (z, residual) = newton_m(self.f, self.a, rect.center(), m, self.tol, NEWTON_MAXIT).ok()?;
        rect.expanded(T::lit(0.1)).contains(z).then_some(RootRecord {
            location: z,
            target: self.a,
            residual,
            multiplicity: m,
            box_certificate: Some(*rect),
            cluster: false,
        })
    }

    fn cluster(&self, rect: &Rect<T>, m: usize) -> Result<RootRecord<T>> {
        if let Some(mut r) = self.newton_in(rect, m) {
            r.cluster = m > 1;
            return Ok(r);
        }
        let z = rect.center();
        let residual = (self.f.value(z, eval_tol(self.tol))? - self.a).norm();
        Ok(RootRecord { location: z, target: self.a, residual, multiplicity: m, box_certificate: Some(*rect), cluster: true })
    }

    fn run(&self, rect: &Rect<T>, count: Count, depth: usize) -> Result<Partial<T>> {
        let diam = rect.diameter();
        let parent = match count {
            Count::Known(0) => return Ok(Partial::empty()),
            Count::Overflow if diam <= self.clip || depth >= MAX_DEPTH => {
                return Ok(Partial { roots: Vec::new(), clipped: rect.area() })
            }
            Count::Overflow => None,
            Count::Known(w) => {
                if w == 1 && diam <= self.leaf {
                    if let Some(r) = self.newton_in(rect, 1) {
                        return Ok(Partial { roots: vec![r], clipped: T::zero() });
                    }
                }
                if depth >= MAX_DEPTH {
                    return Ok(Partial { roots: vec![self.cluster(rect, w)?], clipped: T::zero() });
                }
                Some(w)
            }
        };
        let kids = match self.children(rect, parent) {
            Ok(k) => k,
            // Below the leaf size a multiple root cannot be split further in this precision.
            Err(Error::BoundaryTooClose { .. } | Error::ToleranceNotMet { .. }) if diam <= self.leaf && parent.is_some() => {
                return Ok(Partial { roots: vec![self.cluster(rect, parent.unwrap())?], clipped: T::zero() });
            }
            Err(e) => return Err(e),
        };
        let parts: Vec<Partial<T>> = kids.par_iter().map(|(k, c)| self.run(k, *c, depth + 1)).collect::<Result<_>>()?;
        let mut out = Partial::empty();
        for p in parts {
            out.roots.extend(p.roots);
            out.clipped = out.clipped + p.clipped;
        }
        Ok(out)
    }
}

/// Canonical order: by modulus, then by argument in `[0, 2π)`.
pub fn sort_roots<T: Real>(roots: &mut [RootRecord<T>]) {
    roots.sort_by(|x, y| {
        let kx = (x.location.norm(), arg_of(x.location));
        let ky = (y.location.norm(), arg_of(y.location));
        kx.0.partial_cmp(&ky.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(kx.1.partial_cmp(&ky.1).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Merges records closer than `dist`, summing multiplicities.
fn dedup<T: Real>(roots: Vec<RootRecord<T>>, dist: T) -> Vec<RootRecord<T>> {
    let mut out: Vec<RootRecord<T>> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.iter_mut().find(|o| (o.location - r.location).norm() <= dist) {
            Some(o) => {
                o.multiplicity += r.multiplicity;
                o.cluster = true;
            }
            None => out.push(r),
        }
    }
    out
}

/// Every a-point of `f` in `region`, with multiplicity, sorted by `(|z|, arg z)`.
///
/// `tol` is the Newton residual target relative to `1 + |a|`. If `f − a` nearly vanishes
/// on the boundary, the region is grown by 1% per retry, at most [`JITTER_RETRIES`] times.
pub fn find_a_points<T: Real, F: EntireFunction<T>>(
    f: &F,
    a: Complex<T>,
    region: &Rect<T>,
    tol: T,
) -> Result<RootSearch<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let search = Search {
        f,
        a,
        tol: tol * (T::one() + a.norm()),
        leaf: T::lit(LEAF_DIAMETER),
        clip: region.diameter() / T::lit(256.0),
    };
    let mut found = None;
    let mut last = None;
    for j in 0..=JITTER_RETRIES {
        let rect = region.expanded(T::lit(0.01 * j as f64));
        match search.count(&rect) {
            Ok(c) => {
                found = Some((rect, c));
                break;
            }
            Err(e @ Error::BoundaryTooClose { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    let Some((rect, count)) = found else {
        return Err(last.expect("at least one attempt"));
    };
    let part = search.run(&rect, count, 0)?;
    let mut roots = dedup(part.roots, T::lit(DEDUP_TOL) * rect.diameter());
    sort_roots(&mut roots);
    let winding = match count {
        Count::Known(n) => Some(n),
        Count::Overflow => None,
    };
    let result = RootSearch { roots, region: rect, winding, clipped_area: part.clipped };
    if let Some(n) = winding {
        if result.total_multiplicity() != n {
            return Err(Error::ToleranceNotMet {
                tol: tol.to_f64_lossy(),
                context: format!("found multiplicity {} but the region winds {n} times", result.total_multiplicity()),
            });
        }
    }
    Ok(result)
}

/// [`find_a_points`] for a poly-exp integral, searching the zeros of `f − a` evaluated
/// through [`TargetedFunction`] so that decay sectors with limit `a` stay resolvable.
pub fn find_polyexp_a_points<T: Real>(
    f: &PolyExpFunction<T>,
    a: Complex<T>,
    region: &Rect<T>,
    tol: T,
) -> Result<RootSearch<T>> {
    let g = TargetedFunction::with_default_snap(f, a)?;
    // Relative to 1 + |a| for the original target, as in find_a_points.
    let zero = Complex::new(T::zero(), T::zero());
    let mut s = find_a_points(&g, zero, region, tol * (T::one() + a.norm()))?;
    for r in &mut s.roots {
        r.target = a;
    }
    Ok(s)
}

/// CSV with columns `re, im, target_re, target_im, residual, multiplicity`.
pub fn write_roots_csv<T: Real, W: Write>(roots: &[RootRecord<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidInput(format!("csv output failed: {e}"));
    w.write_record(["re", "im", "target_re", "target_im", "residual", "multiplicity"]).map_err(io)?;
    for r in roots {
        w.write_record([
            r.location.re.to_string(),
            r.location.im.to_string(),
            r.target.re.to_string(),
            r.target.im.to_string(),
            r.residual.to_string(),
            r.multiplicity.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(format!("csv output failed: {e}")))?;
    Ok(())
}
