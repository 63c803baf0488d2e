//! Segment quadrature and argument-principle counts over rectangles.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entire::EntireFunction;
use crate::error::{Error, Result};
use crate::scalar::{cdiv, Real};

/// Maximum bisection depth of the adaptive quadrature.
pub const MAX_QUAD_DEPTH: usize = 50;
const MAX_QUAD_PIECES: usize = 20_000;

/// Proximity of an a-point to the contour, relative to the rectangle diameter.
pub const BOUNDARY_THRESHOLD: f64 = 1e-9;
const MAX_EDGE_STEPS: usize = 200_000;
/// Carried error, relative to `|f − a|`, at which the march re-evaluates `f` directly.
/// Phase increments telescope, so this only has to keep every step's sign test honest.
const RESYNC_FRACTION: f64 = 1e-3;

// Gauss–Kronrod 7/15 abscissae and weights (positive half, descending).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Piece<T> {
    lo: T,
    hi: T,
    value: Complex<T>,
    err: T,
    floor: T,
    depth: usize,
}

fn gk15<T: Real, G>(g: &mut G, z0: Complex<T>, dz: Complex<T>, lo: T, hi: T, depth: usize) -> Result<Piece<T>>
where
    G: FnMut(Complex<T>) -> Result<Complex<T>>,
{
    let half = (hi - lo) * T::lit(0.5);
    let mid = (hi + lo) * T::lit(0.5);
    let mut fv = [Complex::new(T::zero(), T::zero()); 15];
    for j in 0..7 {
        let x = T::lit(XGK[j]) * half;
        fv[2 * j] = g(z0 + dz * (mid - x))?;
        fv[2 * j + 1] = g(z0 + dz * (mid + x))?;
    }
    fv[14] = g(z0 + dz * mid)?;

    let mut kronrod = fv[14] * T::lit(WGK[7]);
    let mut gauss = fv[14] * T::lit(WG[3]);
    let mut resabs = fv[14].norm() * T::lit(WGK[7]);
    for j in 0..7 {
        let pair = fv[2 * j] + fv[2 * j + 1];
        kronrod = kronrod + pair * T::lit(WGK[j]);
        resabs = resabs + (fv[2 * j].norm() + fv[2 * j + 1].norm()) * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    let mean = kronrod * T::lit(0.5);
    let mut resasc = (fv[14] - mean).norm() * T::lit(WGK[7]);
    for j in 0..7 {
        resasc = resasc + ((fv[2 * j] - mean).norm() + (fv[2 * j + 1] - mean).norm()) * T::lit(WGK[j]);
    }

    let scale = half * dz.norm();
    let value = kronrod * dz * half;
    let resabs = resabs * scale;
    let resasc = resasc * scale;
    let mut err = (kronrod - gauss).norm() * scale;
    if resasc > T::zero() && err > T::zero() {
        let ratio = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = if ratio < T::one() { resasc * ratio } else { resasc };
    }
    let floor = T::lit(50.0) * T::epsilon() * resabs;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::ToleranceNotMet { tol: f64::NAN, context: "non-finite integrand".into() });
    }
    Ok(Piece { lo, hi, value, err: err.max(floor), floor, depth })
}

/// Adaptive Gauss–Kronrod integral of `g` along the segment `[z0, z1]`.
///
/// Converges when the summed error estimate is `≤ tol·(1 + |result|)`, or when it is
/// within a few times the summed rounding floor `50·eps·∫|g|`. Bisection deeper than [`MAX_QUAD_DEPTH`]
/// fails with `ToleranceNotMet`.
pub fn integrate_segment<T: Real, G>(g: G, z0: Complex<T>, z1: Complex<T>, tol: T) -> Result<Complex<T>>
where
    G: FnMut(Complex<T>) -> Result<Complex<T>>,
{
    integrate_segment_split(g, z0, z1, tol, 1)
}

/// [`integrate_segment`] starting from `initial` equal pieces, for integrands whose
/// features are narrower than the first Kronrod rule can see.
pub fn integrate_segment_split<T: Real, G>(
    mut g: G,
    z0: Complex<T>,
    z1: Complex<T>,
    tol: T,
    initial: usize,
) -> Result<Complex<T>>
where
    G: FnMut(Complex<T>) -> Result<Complex<T>>,
{
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let dz = z1 - z0;
    if dz.norm() == T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let n = initial.clamp(1, MAX_QUAD_PIECES / 2);
    let nt = T::from_usize(n).unwrap();
    let mut pieces = (0..n)
        .map(|j| gk15(&mut g, z0, dz, T::from_usize(j).unwrap() / nt, T::from_usize(j + 1).unwrap() / nt, 0))
        .collect::<Result<Vec<_>>>()?;
    loop {
        let total: Complex<T> = pieces.iter().fold(Complex::new(T::zero(), T::zero()), |acc, p| acc + p.value);
        let err = pieces.iter().fold(T::zero(), |acc, p| acc + p.err);
        let floor = pieces.iter().fold(T::zero(), |acc, p| acc + p.floor);
        // The second test: the sum is within a few rounding floors, so bisection only adds noise.
        if err <= tol * (T::one() + total.norm()) || err <= T::lit(4.0) * floor {
            return Ok(total);
        }
        let worst = pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.err > p.floor)
            .max_by(|a, b| a.1.err.partial_cmp(&b.1.err).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let Some(worst) = worst else {
            // Rounding-limited everywhere; further bisection cannot help.
            return Ok(total);
        };
        let piece = pieces.swap_remove(worst);
        if piece.depth >= MAX_QUAD_DEPTH || pieces.len() >= MAX_QUAD_PIECES {
            return Err(Error::ToleranceNotMet {
                tol: tol.to_f64_lossy(),
                context: format!("segment quadrature stalled at depth {} (error {:e})", piece.depth, err.to_f64_lossy()),
            });
        }
        let mid = (piece.lo + piece.hi) * T::lit(0.5);
        pieces.push(gk15(&mut g, z0, dz, piece.lo, mid, piece.depth + 1)?);
        pieces.push(gk15(&mut g, z0, dz, mid, piece.hi, piece.depth + 1)?);
    }
}

/// Axis-aligned rectangle with nonempty interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect<T> {
    pub lower_left: Complex<T>,
    pub upper_right: Complex<T>,
}

impl<T: Real> Rect<T> {
    pub fn new(lower_left: Complex<T>, upper_right: Complex<T>) -> Result<Self> {
        if !(upper_right.re > lower_left.re && upper_right.im > lower_left.im) {
            return Err(Error::InvalidInput("rectangle must have positive side lengths".into()));
        }
        Ok(Self { lower_left, upper_right })
    }

    pub fn from_bounds(x0: T, y0: T, x1: T, y1: T) -> Result<Self> {
        Self::new(Complex::new(x0, y0), Complex::new(x1, y1))
    }

    pub fn width(&self) -> T {
        self.upper_right.re - self.lower_left.re
    }

    pub fn height(&self) -> T {
        self.upper_right.im - self.lower_left.im
    }

    pub fn diameter(&self) -> T {
        (self.upper_right - self.lower_left).norm()
    }

    pub fn area(&self) -> T {
        self.width() * self.height()
    }

    pub fn center(&self) -> Complex<T> {
        (self.lower_left + self.upper_right) * T::lit(0.5)
    }

    /// Counterclockwise from the lower-left corner.
    pub fn corners(&self) -> [Complex<T>; 4] {
        let (ll, ur) = (self.lower_left, self.upper_right);
        [ll, Complex::new(ur.re, ll.im), ur, Complex::new(ll.re, ur.im)]
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        z.re >= self.lower_left.re && z.re <= self.upper_right.re && z.im >= self.lower_left.im && z.im <= self.upper_right.im
    }

    /// Grows every side outward by `frac` of the corresponding side length.
    pub fn expanded(&self, frac: T) -> Self {
        let d = Complex::new(self.width() * frac, self.height() * frac);
        Self { lower_left: self.lower_left - d, upper_right: self.upper_right + d }
    }

    /// Four children split at the fractions `fx`, `fy` of the sides, in order
    /// lower-left, lower-right, upper-right, upper-left.
    pub fn split(&self, fx: T, fy: T) -> [Self; 4] {
        let (ll, ur) = (self.lower_left, self.upper_right);
        let xm = ll.re + self.width() * fx;
        let ym = ll.im + self.height() * fy;
        [
            Self { lower_left: ll, upper_right: Complex::new(xm, ym) },
            Self { lower_left: Complex::new(xm, ll.im), upper_right: Complex::new(ur.re, ym) },
            Self { lower_left: Complex::new(xm, ym), upper_right: ur },
            Self { lower_left: Complex::new(ll.re, ym), upper_right: Complex::new(xm, ur.im) },
        ]
    }
}

/// Argument-principle count of a-points inside a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingResult<T> {
    pub count: usize,
    /// `(1/2πi)∮ d log(f − a)`: real part is the winding, imaginary part the log-modulus drift.
    pub raw: Complex<T>,
    pub roundoff: T,
}

struct EdgeIncrement<T> {
    darg: T,
    dlog: T,
}

fn too_close<T: Real>(z: Complex<T>, distance: T) -> Error {
    Error::BoundaryTooClose { at_re: z.re.to_f64_lossy(), at_im: z.im.to_f64_lossy(), distance: distance.to_f64_lossy() }
}

/// Tracks `arg(f − a)` along one edge with steps on which `f − a` provably stays
/// in a disc around its starting value that excludes 0 (to first order).
#[allow(clippy::too_many_arguments)]
fn march_edge<T: Real, F: EntireFunction<T>>(
    f: &F,
    a: Complex<T>,
    start: Complex<T>,
    end: Complex<T>,
    f_start: Complex<T>,
    f_end: Complex<T>,
    tol: T,
    diam: T,
) -> Result<EdgeIncrement<T>> {
    let len = (end - start).norm();
    let dir = (end - start) / len;
    let min_dist = T::lit(BOUNDARY_THRESHOLD) * diam;
    let half = T::lit(0.5);

    let mut s = T::zero();
    let mut z = start;
    let mut fz = f_start;
    let mut dz = f.derivative(start)?;
    let mut h = len * T::lit(0.25);
    let mut darg = T::zero();
    let mut dlog = T::zero();
    // Bound on the error carried by `fz`.
    let mut carried = tol * (T::one() + f_start.norm());

    for _ in 0..MAX_EDGE_STEPS {
        let w0 = fz - a;
        let r0 = w0.norm();
        let dist = if dz.norm() > T::zero() { r0 / dz.norm() } else { T::infinity() };
        if r0 == T::zero() || dist < min_dist {
            return Err(too_close(z, dist));
        }
        h = h.min(T::lit(0.25) * dist).min(len - s);
        loop {
            if h < T::lit(1e-14) * len && h < len - s {
                return Err(too_close(z, dist));
            }
            let last = h >= len - s;
            let z1 = if last { end } else { start + dir * (s + h) };
            let zm = (z + z1) * half;
            let dm = f.derivative(zm)?;
            let d1 = f.derivative(z1)?;
            let bound = (z1 - z).norm() * dz.norm().max(dm.norm()).max(d1.norm());
            if bound > half * r0 {
                h = h * half;
                continue;
            }
            let (f1, e1) = if last {
                (f_end, tol * (T::one() + f_end.norm()))
            } else {
                let inc = f.increment(z, z1, tol)?;
                let f1 = fz + inc;
                let e1 = carried + tol * (T::one() + inc.norm()) + T::epsilon() * f1.norm();
                // Summing increments across a hump in |f| can swamp a small value; resync.
                if e1 > T::lit(RESYNC_FRACTION) * (f1 - a).norm() {
                    let v = f.value(z1, tol)?;
                    (v, tol * (T::one() + v.norm()))
                } else {
                    (f1, e1)
                }
            };
            let w1 = f1 - a;
            if (w1 - w0).norm() > half * r0 {
                h = h * half;
                continue;
            }
            let ratio = cdiv(w1, w0);
            darg = darg + ratio.im.atan2(ratio.re);
            dlog = dlog + w1.norm().ln() - r0.ln();
            s = if last { len } else { s + h };
            z = z1;
            fz = f1;
            carried = e1;
            dz = d1;
            break;
        }
        if s >= len {
            let dist = if dz.norm() > T::zero() { (fz - a).norm() / dz.norm() } else { T::infinity() };
            if dist < min_dist {
                return Err(too_close(z, dist));
            }
            return Ok(EdgeIncrement { darg, dlog });
        }
        h = h * T::lit(2.0);
    }
    Err(Error::ToleranceNotMet { tol: tol.to_f64_lossy(), context: "edge marching exceeded step budget".into() })
}

/// Counts a-points of `f` inside `rect` (with multiplicity) by phase tracking along its boundary.
pub fn winding_number<T: Real, F: EntireFunction<T>>(f: &F, a: Complex<T>, rect: &Rect<T>, tol: T) -> Result<WindingResult<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let corners = rect.corners();
    let values: Vec<Complex<T>> = corners.par_iter().map(|&z| f.value(z, tol)).collect::<Result<_>>()?;
    let diam = rect.diameter();
    let edges: Vec<EdgeIncrement<T>> = (0..4)
        .into_par_iter()
        .map(|k| {
            let j = (k + 1) % 4;
            march_edge(f, a, corners[k], corners[j], values[k], values[j], tol, diam)
        })
        .collect::<Result<_>>()?;
    let (darg, dlog) = edges.iter().fold((T::zero(), T::zero()), |(s, l), e| (s + e.darg, l + e.dlog));
    let raw = Complex::new(darg / T::TAU(), -dlog / T::TAU());
    let rounded = raw.re.round();
    let roundoff = (raw - Complex::new(rounded, T::zero())).norm();
    if !raw.re.is_finite() || rounded < T::zero() || roundoff >= T::lit(0.25) {
        return Err(Error::ToleranceNotMet {
            tol: tol.to_f64_lossy(),
            context: format!("winding integral {} is not near an integer", raw.re.to_f64_lossy()),
        });
    }
    Ok(WindingResult { count: rounded.to_usize().unwrap_or(0), raw, roundoff })
}
