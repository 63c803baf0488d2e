//! Cross-module checks: single vs double precision, additivity of winding counts,
//! Jensen's formula with the root lists, and agreement of the ray rules.

use std::f64::consts::PI;

use num_complex::Complex;
use proptest::prelude::*;
use sectorroots::asymptotics::critical_ray_angles;
use sectorroots::builtin::{example1, example2};
use sectorroots::kernels::kernel_integral_residue;
use sectorroots::rayconfig::{config_rays, AccumulationConfig};
use sectorroots::*;

type C = Complex<f64>;

#[test]
fn single_precision_tracks_double() {
    let d32 = asymptotic_values(&example1::<f32>(), 1e-5).unwrap();
    let d64 = asymptotic_values(&example1::<f64>(), 1e-12).unwrap();
    for (a, b) in d32.values.iter().zip(&d64.values) {
        assert!(((a.re as f64) - b.re).abs() < 1e-4, "{a} vs {b}");
    }
    let z32 = Complex::new(0.7f32, -0.4);
    let v32 = eval_f(&example2::<f32>(), z32, 1e-6).unwrap();
    let v64 = eval_f(&example2::<f64>(), C::new(0.7, -0.4), 1e-13).unwrap();
    assert!((C::new(v32.re as f64, v32.im as f64) - v64).norm() < 1e-5);
    let k32 = kernel_integral_residue(&KernelParams::<f32>::new(0.5, 0.3).unwrap());
    let k64 = kernel_integral_residue(&KernelParams::<f64>::new(0.5, 0.3).unwrap());
    assert!(((k32 as f64) - k64).abs() < 1e-5);
    let s = Sector::<f32>::new(0.0, std::f32::consts::FRAC_PI_4).unwrap();
    assert!(sectorgeom::contains(&s, Complex::new(1.0f32, 0.9)));
}

#[test]
fn single_precision_root_search() {
    let f = example1::<f32>();
    let region = Rect::from_bounds(-2.0f32, -2.0, 2.0, 2.0).unwrap();
    let s = find_polyexp_a_points(&f, Complex::new(0.0, 0.0), &region, 1e-4).unwrap();
    let d = find_polyexp_a_points(&example1::<f64>(), C::new(0.0, 0.0), &Rect::from_bounds(-2.0, -2.0, 2.0, 2.0).unwrap(), 1e-10)
        .unwrap();
    assert_eq!(s.total_multiplicity(), d.total_multiplicity());
    for (a, b) in s.roots.iter().zip(&d.roots) {
        let a = C::new(a.location.re as f64, a.location.im as f64);
        assert!((a - b.location).norm() < 1e-3, "{a} vs {}", b.location);
    }
}

#[test]
fn winding_is_additive_over_quadrants() {
    let f = example2::<f64>();
    let g = TargetedFunction::with_default_snap(&f, C::new(1.0, 0.0)).unwrap();
    let rect = Rect::from_bounds(-3.1, -2.9, 3.3, 3.05).unwrap();
    let whole = winding_number(&g, C::new(0.0, 0.0), &rect, 1e-12).unwrap().count;
    let parts: usize =
        rect.split(0.37, 0.61).iter().map(|r| winding_number(&g, C::new(0.0, 0.0), r, 1e-12).unwrap().count).sum();
    assert_eq!(whole, parts);
    assert!(whole > 0);
}

#[test]
fn jensen_holds_for_example_two_zeros() {
    let f = example2::<f64>();
    let region = Rect::from_bounds(-3.5, -3.5, 3.5, 3.5).unwrap();
    let zeros = find_polyexp_a_points(&f, C::new(0.0, 0.0), &region, 1e-10).unwrap();
    let g = TargetedFunction::with_default_snap(&f, C::new(0.0, 0.0)).unwrap();
    for r in [1.5, 3.0] {
        let j = jensen_check(&g, &zeros.roots, r, 4096, 1e-10).unwrap();
        assert!(j.residual_from_zero() < 1e-6, "r = {r}: {}", j.residual_from_zero());
    }
}

#[test]
fn found_points_solve_the_equation_directly() {
    let f = example1::<f64>();
    let region = Rect::from_bounds(-3.0, -3.0, 3.0, 3.0).unwrap();
    let a = C::new(0.25, 0.1);
    let s = find_polyexp_a_points(&f, a, &region, 1e-10).unwrap();
    assert!(!s.roots.is_empty());
    for r in &s.roots {
        // Plain quadrature from 0, independent of the decay-sector evaluation used in the search.
        let v = eval_f(&f, r.location, 1e-14).unwrap();
        assert!((v - a).norm() < 1e-8, "{}: {}", r.location, (v - a).norm());
    }
}

#[test]
fn combinatorial_and_analytic_rays_agree_for_exp() {
    let f = builtin::exponential::<f64>();
    let data = asymptotic_values(&f, 1e-12).unwrap();
    let cfg = AccumulationConfig::from_asymptotics(&data).unwrap();
    let (z, o) = config_rays(&cfg);
    assert!(z.approx_eq(&accumulation_rays_analytic(&data, C::new(0.0, 0.0), 1e-8), 1e-12));
    assert!(o.approx_eq(&accumulation_rays_analytic(&data, C::new(1.0, 0.0), 1e-8), 1e-12));
    assert!(z.is_empty() && o.len() == 2);
}

proptest! {
    // Along each critical ray the leading term A z^d is real and negative.
    #[test]
    fn critical_rays_are_steepest_decay(d in 1usize..9, arg in -PI..PI) {
        for phi in critical_ray_angles(d, arg) {
            let w = C::from_polar(1.0, arg) * C::from_polar(1.0, phi * d as f64);
            prop_assert!((w.re + 1.0).abs() < 1e-9 && w.im.abs() < 1e-9);
        }
    }

    // g(z) = f(e^{iτ} z) has the rays of f turned by −τ and the same limits.
    #[test]
    fn rays_follow_a_rotation_of_the_variable(tau in 0.0..(2.0 * PI)) {
        let f = example1::<f64>();
        let k = f.p.coeffs()[2];
        let zero = C::new(0.0, 0.0);
        let p = Polynomial::new(vec![zero, zero, k * C::from_polar(1.0, 3.0 * tau)]);
        let q = Polynomial::new(vec![zero, zero, -C::from_polar(1.0, 2.0 * tau)]);
        let g = PolyExpFunction::new(p, q, f.c);
        let data = asymptotic_values(&g, 1e-10).unwrap();
        let base = asymptotic_values(&f, 1e-10).unwrap();
        for target in [C::new(0.0, 0.0), C::new(1.0, 0.0)] {
            let rays = accumulation_rays_analytic(&data, target, 1e-6);
            let expect = accumulation_rays_analytic(&base, target, 1e-6).rotated(-tau);
            prop_assert!(expect.approx_eq(&rays, 1e-9), "{:?} vs {:?}", expect.angles(), rays.angles());
        }
        let cfg = AccumulationConfig::from_asymptotics(&data).unwrap();
        prop_assert_eq!(config_rays(&cfg).0.len(), 2);
    }
}
