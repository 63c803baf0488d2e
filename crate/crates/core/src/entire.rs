//! The evaluation interface the contour and root-finding machinery runs on.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::polyexp::{eval_f, eval_f_prime, integrate_path, PolyExpFunction};
use crate::scalar::Real;

/// An entire function that can report values, exact derivatives and path increments.
///
/// `tol` follows the mixed convention `|error| ≤ tol·(1 + |result|)`.
pub trait EntireFunction<T: Real>: Sync {
    fn value(&self, z: Complex<T>, tol: T) -> Result<Complex<T>>;

    fn derivative(&self, z: Complex<T>) -> Result<Complex<T>>;

    /// `f(z1) − f(z0)`.
    fn increment(&self, z0: Complex<T>, z1: Complex<T>, tol: T) -> Result<Complex<T>> {
        Ok(self.value(z1, tol)? - self.value(z0, tol)?)
    }

    /// `log |f(z)|`, `−∞` at zeros.
    fn log_abs(&self, z: Complex<T>, tol: T) -> Result<T> {
        Ok(self.value(z, tol)?.norm().ln())
    }
}

impl<T: Real> EntireFunction<T> for PolyExpFunction<T> {
    fn value(&self, z: Complex<T>, tol: T) -> Result<Complex<T>> {
        eval_f(self, z, tol)
    }

    fn derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        let s = eval_f_prime(self, z);
        s.to_complex().ok_or(Error::OverflowRegion {
            re_q: self.q.eval(z).re.to_f64_lossy(),
            at_re: z.re.to_f64_lossy(),
            at_im: z.im.to_f64_lossy(),
        })
    }

    fn increment(&self, z0: Complex<T>, z1: Complex<T>, tol: T) -> Result<Complex<T>> {
        integrate_path(self, z0, z1, tol)
    }
}
