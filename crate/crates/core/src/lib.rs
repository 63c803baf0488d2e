//! Value distribution of entire functions `f(z) = ∫₀ᶻ p(ζ) e^{q(ζ)} dζ + c`.
//!
//! Critical rays and asymptotic values, certified a-point search by the argument
//! principle, sector classification, growth and counting functions, a kernel identity
//! check, and an exhaustive enumeration of accumulation-ray configurations.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar for the common case.

pub mod asymptotics;
pub mod builtin;
pub mod contour;
pub mod entire;
pub mod error;
pub mod kernels;
pub mod polyexp;
pub mod rayconfig;
pub mod rootfinder;
pub mod scalar;
pub mod sectorgeom;
pub mod valuedist;

pub use asymptotics::{
    accumulation_rays_analytic, asymptotic_approx, asymptotic_values, critical_rays, AsymptoticData, TargetedFunction,
};
pub use contour::{winding_number, Rect, WindingResult};
pub use entire::EntireFunction;
pub use error::{Error, Result};
pub use kernels::{kernel_bounds_check, kernel_report, BoundsReport, KernelParams, KernelReport};
pub use polyexp::{eval_f, eval_f_prime, eval_f_scaled, FunctionSpec, PolyExpFunction, Polynomial, ScaledComplex};
pub use rayconfig::{assess, config_rays, enumerate_configs, AccumulationConfig, EnumerationReport, FeasibilityVerdict};
pub use rootfinder::{find_a_points, find_polyexp_a_points, newton_refine, RootRecord, RootSearch};
pub use scalar::Real;
pub use sectorgeom::{minimal_cone, sector_report, RaySet, Sector, SectorReport};
pub use valuedist::{
    counting_functions, jensen_check, log_max_modulus, order_estimate, CanonicalProduct, CountingTable, JensenCheck,
};

pub type C64 = num_complex::Complex<f64>;
pub type C32 = num_complex::Complex<f32>;

pub type PolynomialF64 = Polynomial<f64>;
pub type PolyExpF64 = PolyExpFunction<f64>;
pub type PolyExpF32 = PolyExpFunction<f32>;
pub type ScaledF64 = ScaledComplex<f64>;
pub type RectF64 = Rect<f64>;
pub type SectorF64 = Sector<f64>;
pub type SectorF32 = Sector<f32>;
pub type RaySetF64 = RaySet<f64>;
pub type AsymptoticDataF64 = AsymptoticData<f64>;
pub type RootRecordF64 = RootRecord<f64>;
pub type RootSearchF64 = RootSearch<f64>;
pub type CountingTableF64 = CountingTable<f64>;
pub type CanonicalProductF64 = CanonicalProduct<f64>;
pub type KernelParamsF64 = KernelParams<f64>;
pub type KernelReportF64 = KernelReport<f64>;
pub type AccumulationConfigF64 = AccumulationConfig<f64>;
pub type FeasibilityVerdictF64 = FeasibilityVerdict<f64>;
