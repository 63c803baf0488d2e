use thiserror::Error;

/// Every failure mode of the toolkit. Numeric payloads are diagnostics, stored as `f64`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Re q = {re_q:.3} exceeds the overflow guard on the integration path at {at_re}+{at_im}i")]
    OverflowRegion { re_q: f64, at_re: f64, at_im: f64 },

    #[error("tolerance {tol:e} not met: {context}")]
    ToleranceNotMet { tol: f64, context: String },

    #[error("a-point too close to the contour near {at_re}+{at_im}i (distance estimate {distance:e})")]
    BoundaryTooClose { at_re: f64, at_im: f64, distance: f64 },

    #[error("q is constant; asymptotics need deg q >= 1")]
    DegreeZero,

    #[error("q'(z) nearly vanishes at {at_re}+{at_im}i")]
    NearCriticalZero { at_re: f64, at_im: f64 },

    #[error("subdivision passed depth {depth}")]
    DepthExceeded { depth: usize },

    #[error("Newton iteration did not converge in {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("derivative vanishes at {at_re}+{at_im}i")]
    DerivativeVanishes { at_re: f64, at_im: f64 },

    #[error("empty ray set")]
    EmptyRaySet,

    #[error("log M(r) = {log_m} <= 1 at r = {r}; grid starts too close to the origin")]
    NonPositiveLogM { r: f64, log_m: f64 },

    #[error("product tail bound {bound:e} too large at |z| = {modulus}")]
    TailTooLarge { bound: f64, modulus: f64 },

    #[error("kernel bound {bound} violated at x = {x} (|K| = {value}, bound value {limit})")]
    BoundViolated { bound: &'static str, x: f64, value: f64, limit: f64 },

    #[error("counterexample found: {0}")]
    CounterexampleFound(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
