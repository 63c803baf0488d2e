//! End-to-end acceptance checks, one PASS/FAIL line per criterion.
//!
//! Exits 0 after printing every line; set `ACCEPTANCE_STRICT=1` to exit 1 on any FAIL.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::time::Instant;

use num_complex::Complex;
use sectorroots::asymptotics::asymptotic_approx;
use sectorroots::builtin::{example1, example2, example2_coefficients, exponential};
use sectorroots::kernels::{kernel_params_grid, EPS_GRID};
use sectorroots::rayconfig::{config_rays, AccumulationConfig};
use sectorroots::scalar::angular_distance;
use sectorroots::valuedist::canonical_one_point_rays;
use sectorroots::*;

type C = Complex<f64>;

const TOL: f64 = 1e-10;

struct Outcome {
    passed: usize,
    failed: Vec<String>,
}

impl Outcome {
    fn record(&mut self, id: &str, ok: bool, what: &str, measured: String) {
        println!("{} [{id}] {what}: {measured}", if ok { "PASS" } else { "FAIL" });
        if ok {
            self.passed += 1;
        } else {
            self.failed.push(id.to_string());
        }
    }

    fn error(&mut self, id: &str, what: &str, e: impl std::fmt::Display) {
        self.record(id, false, what, format!("error: {e}"));
    }
}

fn c0() -> C {
    C::new(0.0, 0.0)
}

fn c1() -> C {
    C::new(1.0, 0.0)
}

fn max_residual(s: &RootSearch<f64>) -> f64 {
    s.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
}

fn far(s: &RootSearch<f64>, r0: f64, r1: f64) -> Vec<C> {
    s.locations().into_iter().filter(|z| z.norm() >= r0 && z.norm() <= r1).collect()
}

/// `|a − b|/|b|` for scaled values.
fn relative_gap(a: ScaledComplex<f64>, b: ScaledComplex<f64>) -> f64 {
    let q = a.div(b);
    (C::from_polar(q.logmag.exp(), q.phase) - 1.0).norm()
}

fn criterion_1(out: &mut Outcome) -> Option<RootSearch<f64>> {
    let f = example1::<f64>();
    let region = Rect::from_bounds(-8.0, -8.0, 8.0, 8.0).unwrap();
    let t = Instant::now();
    let zeros = find_polyexp_a_points(&f, c0(), &region, TOL);
    let ones = find_polyexp_a_points(&f, c1(), &region, TOL);
    let secs = t.elapsed().as_secs_f64();
    let (zeros, ones) = match (zeros, ones) {
        (Ok(z), Ok(o)) => (z, o),
        (Err(e), _) | (_, Err(e)) => {
            out.error("1", "example 1 geometry", e);
            return None;
        }
    };
    let zmax = far(&zeros, 3.0, f64::INFINITY).iter().map(|z| z.arg().abs()).fold(0.0, f64::max);
    let omax = far(&ones, 3.0, f64::INFINITY).iter().map(|z| PI - z.arg().abs()).fold(0.0, f64::max);
    let bound = FRAC_PI_4 + 0.05;
    out.record(
        "1a",
        zmax < bound,
        "example 1 zeros with |z| >= 3: |arg z| < π/4 + 0.05",
        format!("{} zeros, max |arg z| = {zmax:.6} (bound {bound:.6})", zeros.roots.len()),
    );
    out.record(
        "1b",
        omax < bound,
        "example 1 1-points with |z| >= 3: |arg z − π| < π/4 + 0.05",
        format!("{} 1-points, max |arg z − π| = {omax:.6}", ones.roots.len()),
    );
    let res = max_residual(&zeros).max(max_residual(&ones));
    out.record("1c", res < 1e-9, "example 1 root residuals < 1e-9", format!("max residual {res:.3e}"));
    let wz = zeros.winding == Some(zeros.total_multiplicity());
    let wo = ones.winding == Some(ones.total_multiplicity());
    out.record(
        "1d",
        wz && wo,
        "example 1 multiplicities equal winding counts",
        format!(
            "zeros {} vs {:?}, 1-points {} vs {:?}",
            zeros.total_multiplicity(),
            zeros.winding,
            ones.total_multiplicity(),
            ones.winding
        ),
    );
    out.record("1e", secs < 60.0, "example 1 search runtime < 60 s", format!("{secs:.1} s"));
    Some(zeros)
}

fn criterion_2(out: &mut Outcome) {
    let check = |f: &PolyExpF64, expect: &[f64]| -> std::result::Result<f64, Error> {
        let data = asymptotic_values(f, 1e-12)?;
        Ok(data.values.iter().zip(expect).map(|(v, &e)| (v - e).norm()).fold(0.0, f64::max))
    };
    match check(&example1(), &[1.0, 0.0]) {
        Ok(e) => out.record("2a", e <= 1e-8, "example 1 asymptotic values (1, 0) ± 1e-8", format!("max error {e:.3e}")),
        Err(e) => out.error("2a", "example 1 asymptotic values", e),
    }
    match check(&example2(), &[1.0, 0.0, 0.0]) {
        Ok(e) => out.record("2b", e <= 1e-8, "example 2 asymptotic values (1, 0, 0) ± 1e-8", format!("max error {e:.3e}")),
        Err(e) => out.error("2b", "example 2 asymptotic values", e),
    }
    let (a, b) = example2_coefficients::<f64>();
    let ga = 1.0 / statrs::function::gamma::gamma(4.0 / 3.0);
    let gb = 1.0 / statrs::function::gamma::gamma(2.0 / 3.0);
    let e = (a - ga).abs().max((b - gb).abs());
    out.record(
        "2c",
        e <= 1e-10,
        "example 2 coefficients by quadrature vs independent Γ",
        format!("a = {a:.15}, b = {b:.15}, max deviation {e:.3e}"),
    );
}

fn criterion_3(out: &mut Outcome) {
    let f = example2::<f64>();
    let region = Rect::from_bounds(-6.0, -6.0, 6.0, 6.0).unwrap();
    let zeros = find_polyexp_a_points(&f, c0(), &region, TOL);
    let ones = find_polyexp_a_points(&f, c1(), &region, TOL);
    let (zeros, ones) = match (zeros, ones) {
        (Ok(z), Ok(o)) => (z, o),
        (Err(e), _) | (_, Err(e)) => return out.error("3", "example 2 geometry", e),
    };
    let zs = far(&zeros, 3.0, 6.0);
    let zmax = zs.iter().map(|z| z.arg().abs()).fold(0.0, f64::max);
    out.record(
        "3a",
        zmax < FRAC_PI_6 + 0.05,
        "example 2 zeros with 3 <= |z| <= 6: |arg z| < π/6 + 0.05",
        format!("{} of {} zeros classified, max |arg z| = {zmax:.6}", zs.len(), zeros.roots.len()),
    );
    let os = far(&ones, 3.0, 6.0);
    let worst = os.iter().map(|z| z.re / z.norm()).fold(f64::NEG_INFINITY, f64::max);
    out.record(
        "3b",
        worst < 0.05,
        "example 2 1-points with 3 <= |z| <= 6: Re z < 0.05·|z|",
        format!("{} of {} 1-points classified, max Re z/|z| = {worst:.6}", os.len(), ones.roots.len()),
    );
}

fn criterion_4(out: &mut Outcome) {
    for (id, name, f) in [("4a", "example 1", example1::<f64>()), ("4b", "example 2", example2::<f64>())] {
        let run = || -> std::result::Result<(f64, f64), Error> {
            let data = asymptotic_values(&f, 1e-12)?;
            let phi1 = critical_ray_angles_first(&data);
            let theta = phi1 + PI / (2.0 * data.d as f64) + 0.2;
            let err = |r: f64| -> std::result::Result<f64, Error> {
                let z = C::from_polar(r, theta);
                let exact = eval_f_scaled(&f, z, 1e-14)?;
                let (approx, _) = asymptotic_approx(&f, z, &data)?;
                Ok(relative_gap(approx, exact))
            };
            Ok((err(10.0)?, err(20.0)?))
        };
        match run() {
            Ok((e10, e20)) => {
                let ratio = e20 / e10;
                out.record(
                    id,
                    (0.3..=0.7).contains(&ratio),
                    &format!("{name} error(20)/error(10) in [0.3, 0.7]"),
                    format!("error(10) = {e10:.4e}, error(20) = {e20:.4e}, ratio {ratio:.4}"),
                );
            }
            Err(e) => out.error(id, &format!("{name} asymptotic decay"), e),
        }
    }
}

/// `φ₁ = (π − arg A)/d mod 2π`.
fn critical_ray_angles_first(data: &AsymptoticData<f64>) -> f64 {
    sectorroots::asymptotics::critical_ray_angles(data.d, data.leading.arg())[0]
}

fn criterion_5(out: &mut Outcome) {
    let grid = kernel_params_grid::<f64>().expect("grid parameters are valid");
    let mut worst: f64 = 0.0;
    for p in &grid {
        match kernel_report(p, 1e-12) {
            Ok(r) => worst = worst.max(r.abs_diff),
            Err(e) => return out.error("5a", "kernel identity", e),
        }
    }
    out.record(
        "5a",
        worst < 1e-6,
        "kernel closed form vs quadrature < 1e-6 on the 16-point grid",
        format!("max |difference| = {worst:.3e}"),
    );
    for eps in EPS_GRID.iter().copied().filter(|e| *e <= 1.0) {
        let p = KernelParams::new(eps, 1e-3).unwrap();
        let residue = sectorroots::kernels::kernel_integral_residue(&p);
        let quad = sectorroots::kernels::kernel_integral_quadrature(&p, 1e-12);
        let limit = FRAC_PI_2 * eps.sin();
        let gap = (residue - limit).abs();
        out.record(
            &format!("5b eps={eps}"),
            gap < 1e-3,
            "delta = 1e-3: |value − (π/2) sin ε| < 1e-3",
            format!(
                "residue {residue:.9}, quadrature {}, (π/2) sin ε = {limit:.9}, gap {gap:.3e}",
                quad.map_or_else(|e| e.to_string(), |q| format!("{q:.9}"))
            ),
        );
    }
}

fn criterion_6(out: &mut Outcome, zeros: Option<&RootSearch<f64>>) {
    let Some(zeros) = zeros else {
        return out.record("6", false, "Jensen identity", "no zeros from criterion 1".into());
    };
    let f = example1::<f64>();
    let g = TargetedFunction::with_default_snap(&f, c0()).unwrap();
    for r in [2.0, 4.0, 6.0] {
        match jensen_check(&g, &zeros.roots, r, 4096, TOL) {
            Ok(j) => out.record(
                &format!("6 r={r}"),
                j.residual() <= 1e-4,
                "example 1 |N(r) + log|f(0)| − mean log|f|| <= 1e-4",
                format!(
                    "residual {:.3e} with N from 1; {:.3e} with N from 0 (mean {:.9}, N {:.9})",
                    j.residual(),
                    j.residual_from_zero(),
                    j.circle_mean,
                    j.counting
                ),
            ),
            Err(e) => out.error(&format!("6 r={r}"), "Jensen identity", e),
        }
    }
}

fn criterion_7(out: &mut Outcome) {
    let grid = [4.0, 5.6, 8.0, 11.0];
    let cases: [(&str, PolyExpF64, f64, f64); 3] =
        [("7a", exponential(), 1.0, 0.05), ("7b", example1(), 2.0, 0.1), ("7c", example2(), 3.0, 0.15)];
    for (id, f, expect, tol) in cases {
        let g = TargetedFunction::with_default_snap(&f, c0()).unwrap();
        match order_estimate(&g, &grid, 1024, TOL) {
            Ok(rho) => out.record(
                id,
                (rho - expect).abs() <= tol,
                &format!("order {expect} ± {tol} on r = 4..11"),
                format!("estimate {rho:.5}"),
            ),
            Err(e) => out.error(id, "order estimate", e),
        }
    }
}

fn criterion_8(out: &mut Outcome) {
    let p = CanonicalProduct::new(0.5, 4096).unwrap();
    let oracle = PI.sinh() / PI;
    match p.eval(C::new(-1.0, 0.0)) {
        Ok(v) => {
            let e = (v - oracle).norm();
            out.record("8a", e <= 1e-6, "rho = 1/2 product at −1 equals sinh(π)/π ± 1e-6", format!("{} vs {oracle}, error {e:.3e}", v.re))
        }
        Err(e) => out.error("8a", "rho = 1/2 product", e),
    }
    let p = CanonicalProduct::new(1.0 / 3.0, 4096).unwrap();
    let rays = canonical_one_point_rays(1.0 / 3.0).unwrap();
    let region = Rect::from_bounds(-60.0, -60.0, 60.0, 60.0).unwrap();
    match find_a_points(&p, c1(), &region, TOL) {
        Ok(s) => {
            let pts = far(&s, 20.0, 60.0);
            let dev = |z: &C| rays.angles().iter().map(|&r| angular_distance(z.arg(), r)).fold(f64::INFINITY, f64::min);
            let worst = pts.iter().map(dev).fold(0.0, f64::max);
            let args: Vec<String> = pts.iter().map(|z| format!("{:.3}", z.arg())).collect();
            out.record(
                "8b",
                !pts.is_empty() && worst <= 0.3,
                "rho = 1/3 1-points in 20 <= |z| <= 60 within 0.3 of ±π/2",
                format!("{} points, args [{}], max deviation {worst:.4}", pts.len(), args.join(", ")),
            );
        }
        Err(e) => out.error("8b", "rho = 1/3 1-points", e),
    }
}

fn criterion_9(out: &mut Outcome) {
    match enumerate_configs(8, 16) {
        Ok(r) => out.record(
            "9a",
            r.violations.is_empty(),
            "enumerate_configs(dmax = 8): no counterexamples to (i)–(iii)",
            format!("{} configurations, {} violations", r.configs_checked, r.violations.len()),
        ),
        Err(e) => out.error("9a", "enumeration", e),
    }
    let published: [(PolyExpF64, Vec<f64>, Vec<f64>); 2] = [
        (example1(), vec![FRAC_PI_4, 7.0 * FRAC_PI_4], vec![3.0 * FRAC_PI_4, 5.0 * FRAC_PI_4]),
        (example2(), vec![FRAC_PI_6, 11.0 * FRAC_PI_6], vec![FRAC_PI_2, 5.0 * FRAC_PI_6, 7.0 * FRAC_PI_6, 3.0 * FRAC_PI_2]),
    ];
    for (i, (f, z, o)) in published.into_iter().enumerate() {
        let id = format!("9{}", ["b", "c"][i]);
        let run = || -> std::result::Result<(bool, String), Error> {
            let data = asymptotic_values(&f, 1e-12)?;
            let cfg = AccumulationConfig::from_asymptotics(&data)
                .ok_or_else(|| Error::InvalidInput("limits are not all in {0, 1}".into()))?;
            let (zr, or) = config_rays(&cfg);
            let ok = zr.approx_eq(&RaySet::new(z), 1e-9) && or.approx_eq(&RaySet::new(o), 1e-9);
            let v = assess(&cfg);
            Ok((ok, format!(
                "assignment {:?}, zero rays {:?}, one rays {:?}, openings ({:.6}, {:.6})",
                cfg.assignment,
                zr.angles(),
                or.angles(),
                v.zero_cone_opening,
                v.one_cone_opening
            )))
        };
        match run() {
            Ok((ok, msg)) => out.record(&id, ok, &format!("example {} ray sets match to 1e-9", i + 1), msg),
            Err(e) => out.error(&id, "example ray sets", e),
        }
    }
    let v1 = assess(&AccumulationConfig::new(2, PI, vec![1, 0]).unwrap());
    let v2 = assess(&AccumulationConfig::new(3, PI, vec![1, 0, 0]).unwrap());
    let ok = !v1.theorem1_hypothesis_met
        && (v1.zero_cone_opening - FRAC_PI_2).abs() < 1e-9
        && !v2.theorem3_hypothesis_met
        && (v2.zero_cone_opening - FRAC_PI_3).abs() < 1e-9;
    out.record(
        "9d",
        ok,
        "example configurations sit exactly on the hypothesis boundaries",
        format!("openings ({:.6}, {:.6}) and ({:.6}, {:.6})", v1.zero_cone_opening, v1.one_cone_opening, v2.zero_cone_opening, v2.one_cone_opening),
    );
}

fn main() {
    let start = Instant::now();
    let mut out = Outcome { passed: 0, failed: Vec::new() };
    let zeros = criterion_1(&mut out);
    criterion_2(&mut out);
    criterion_3(&mut out);
    criterion_4(&mut out);
    criterion_5(&mut out);
    criterion_6(&mut out, zeros.as_ref());
    criterion_7(&mut out);
    criterion_8(&mut out);
    criterion_9(&mut out);
    println!(
        "acceptance: {} passed, {} failed{} ({:.1} s)",
        out.passed,
        out.failed.len(),
        if out.failed.is_empty() { String::new() } else { format!(" [{}]", out.failed.join(", ")) },
        start.elapsed().as_secs_f64()
    );
    if !out.failed.is_empty() && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
