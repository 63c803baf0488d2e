//! Command implementations and report types behind the `sectorroots` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use sectorroots::builtin;
use sectorroots::kernels::{kernel_params_grid, KernelParams};
use sectorroots::rayconfig::{enumerate_configs, AccumulationConfig, EnumerationReport};
use sectorroots::rootfinder::{find_a_points, find_polyexp_a_points, write_roots_csv};
use sectorroots::sectorgeom::{sector_report, Sector, SectorReport};
use sectorroots::valuedist::{
    canonical_one_point_rays, counting_functions, jensen_check, log_max_modulus, write_counting_csv, CanonicalProduct,
    CountingTable, JensenCheck,
};
use sectorroots::{
    accumulation_rays_analytic, asymptotic_values, kernel_report, FunctionSpec, KernelReport, PolyExpF64, Rect,
    RootRecord, TargetedFunction, C64,
};

/// Exit status when a checked hypothesis is violated.
pub const EXIT_VIOLATED: i32 = 1;
/// Exit status for input or evaluation errors.
pub const EXIT_ERROR: i32 = 2;

const DEFAULT_TOL: f64 = 1e-10;
const LOG_M_SAMPLES: usize = 1024;
const JENSEN_SAMPLES: usize = 4096;
const KERNEL_TOL: f64 = 1e-6;
/// Slack added to the half-openings checked by `verify`.
const SECTOR_SLACK: f64 = 0.05;
const PRODUCT_ANGLE_TOL: f64 = 0.3;

#[derive(Debug, Parser)]
#[command(name = "sectorroots", version, about = "Value distribution of entire functions ∫₀ᶻ p e^q + c")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Function spec: JSON `{"p": [[re, im], ...], "q": [...], "c": [re, im]}`.
    #[arg(long, global = true, conflicts_with = "example")]
    pub spec: Option<PathBuf>,
    /// Built-in function: 1, 2 or exp.
    #[arg(long, global = true)]
    pub example: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "SECTORROOTS_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Directory for report.json and the CSV / gnuplot data files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical rays and asymptotic values.
    Rays,
    /// a-points in a rectangle, optionally checked against a sector.
    Roots(RootsArgs),
    /// Reproduce the sector geometry of a built-in example.
    Verify,
    /// Exhaustive check of accumulation-ray configurations.
    Enumerate {
        #[arg(long, default_value_t = 8)]
        dmax: usize,
        #[arg(long, default_value_t = 16)]
        arg_samples: usize,
    },
    /// Kernel integral: closed form against quadrature.
    KernelCheck,
    /// Order of growth from log M(r).
    Order {
        #[arg(long, value_delimiter = ',', default_values_t = [4.0, 5.6, 8.0, 11.0])]
        rgrid: Vec<f64>,
    },
    /// Counting functions n(r), N(r) against log M(r).
    Counting {
        #[arg(long, value_parser = parse_complex, default_value = "0,0", allow_hyphen_values = true)]
        target: C64,
        #[arg(long, value_delimiter = ',', default_values_t = [2.0, 4.0, 6.0])]
        rgrid: Vec<f64>,
    },
    /// Canonical product with zeros n^{1/rho}.
    Product(ProductArgs),
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(long, value_parser = parse_complex, default_value = "0,0", allow_hyphen_values = true)]
    pub target: C64,
    #[arg(long, value_parser = parse_rect, default_value = "-8,-8,8,8", allow_hyphen_values = true)]
    pub region: Rect<f64>,
    /// Points with |z| < r0 are not classified.
    #[arg(long, default_value_t = 3.0)]
    pub r0: f64,
    /// Sector to test: BISECTOR,HALF_OPENING (radians).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub sector: Option<C64>,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 4096)]
    pub nterms: usize,
    /// Evaluate at RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub eval: Option<C64>,
    /// Search this rectangle for a-points of the product.
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
    pub region: Option<Rect<f64>>,
    #[arg(long, value_parser = parse_complex, default_value = "1,0", allow_hyphen_values = true)]
    pub target: C64,
    /// Annulus R0,R1 of the points compared with the predicted rays.
    #[arg(long, value_delimiter = ',', default_values_t = [20.0, 60.0])]
    pub annulus: Vec<f64>,
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

fn parse_complex(s: &str) -> Result<C64, String> {
    match parse_list(s)?.as_slice() {
        [re, im] => Ok(Complex::new(*re, *im)),
        _ => Err("expected RE,IM".into()),
    }
}

fn parse_rect(s: &str) -> Result<Rect<f64>, String> {
    match parse_list(s)?.as_slice() {
        [x0, y0, x1, y1] => Rect::from_bounds(*x0, *y0, *x1, *y1).map_err(|e| e.to_string()),
        _ => Err("expected X0,Y0,X1,Y1".into()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaysReport {
    pub d: usize,
    pub leading: C64,
    pub rays: Vec<f64>,
    pub values: Vec<C64>,
    pub value_tol: f64,
    pub zero_rays: Vec<f64>,
    pub one_rays: Vec<f64>,
    /// The `{0, 1}` assignment when every limit is 0 or 1.
    pub assignment: Option<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootsReport {
    pub target: C64,
    pub region: Rect<f64>,
    pub winding: Option<usize>,
    pub clipped_area: f64,
    pub total_multiplicity: usize,
    pub max_residual: f64,
    pub roots: Vec<RootRecord<f64>>,
    pub sector: Option<SectorReport<f64>>,
    pub holds: bool,
}

/// One geometric statement checked by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<C64>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub example: String,
    pub zeros: RootsReport,
    pub one_points: RootsReport,
    pub checks: Vec<Check>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCheckReport {
    pub reports: Vec<KernelReport<f64>>,
    pub max_abs_diff: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub radii: Vec<f64>,
    pub log_m: Vec<f64>,
    pub order: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingReport {
    pub target: C64,
    pub table: CountingTable<f64>,
    /// Jensen's formula at each radius; only for zeros.
    pub jensen: Vec<JensenCheck<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductPoints {
    pub target: C64,
    pub rays: Vec<f64>,
    pub annulus: [f64; 2],
    pub roots: Vec<RootRecord<f64>>,
    /// Largest angular distance from the predicted rays within the annulus.
    pub max_deviation: Option<f64>,
    pub angle_tol: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductReport {
    pub rho: f64,
    pub n_terms: usize,
    pub r_max: f64,
    pub eval_at: Option<C64>,
    pub value: Option<C64>,
    pub points: Option<ProductPoints>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Rays(RaysReport),
    Roots(RootsReport),
    Verify(VerifyReport),
    Enumerate(EnumerationReport),
    KernelCheck(KernelCheckReport),
    Order(OrderReport),
    Counting(CountingReport),
    Product(ProductReport),
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        let holds = match self {
            Report::Roots(r) => r.holds,
            Report::Verify(r) => r.holds,
            Report::Enumerate(r) => r.violations.is_empty(),
            Report::KernelCheck(r) => r.holds,
            Report::Product(r) => r.points.as_ref().is_none_or(|p| p.holds),
            Report::Rays(_) | Report::Order(_) | Report::Counting(_) => true,
        };
        if holds {
            0
        } else {
            EXIT_VIOLATED
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

fn load_function(cli: &Cli) -> anyhow::Result<PolyExpF64> {
    let f = match (&cli.spec, &cli.example) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            FunctionSpec::from_json(&text)?.to_function()
        }
        (None, Some(name)) => builtin::by_name(name).ok_or_else(|| anyhow!("unknown example {name:?}"))?,
        (None, None) => bail!("a function is required: pass --spec PATH or --example N"),
    };
    if f.p.is_zero() {
        bail!("constant function: p = 0, so f ≡ c has no rays and no a-points");
    }
    Ok(f)
}

fn check_tol(tol: f64) -> anyhow::Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        bail!("--tol must be positive");
    }
    Ok(())
}

pub fn run(cli: &Cli) -> anyhow::Result<Report> {
    check_tol(cli.tol)?;
    Ok(match &cli.command {
        Command::Rays => Report::Rays(cmd_rays(&load_function(cli)?, cli.tol)?),
        Command::Roots(a) => {
            let f = load_function(cli)?;
            let sector = a.sector.map(|s| Sector::new(s.re, s.im)).transpose()?;
            Report::Roots(cmd_roots(&f, a.target, &a.region, a.r0, sector, cli.tol)?)
        }
        Command::Verify => {
            let name = cli.example.as_deref().ok_or_else(|| anyhow!("verify needs --example 1 or 2"))?;
            Report::Verify(cmd_verify(name, cli.tol)?)
        }
        Command::Enumerate { dmax, arg_samples } => Report::Enumerate(enumerate_configs(*dmax, *arg_samples)?),
        Command::KernelCheck => Report::KernelCheck(cmd_kernel_check()?),
        Command::Order { rgrid } => Report::Order(cmd_order(&load_function(cli)?, rgrid, cli.tol)?),
        Command::Counting { target, rgrid } => {
            Report::Counting(cmd_counting(&load_function(cli)?, *target, rgrid, cli.tol)?)
        }
        Command::Product(a) => Report::Product(cmd_product(a, cli.tol)?),
    })
}

pub fn cmd_rays(f: &PolyExpF64, tol: f64) -> anyhow::Result<RaysReport> {
    let data = asymptotic_values(f, tol)?;
    let zero = accumulation_rays_analytic(&data, Complex::new(0.0, 0.0), tol.sqrt());
    let one = accumulation_rays_analytic(&data, Complex::new(1.0, 0.0), tol.sqrt());
    Ok(RaysReport {
        d: data.d,
        leading: data.leading,
        assignment: AccumulationConfig::from_asymptotics(&data).map(|c| c.assignment),
        rays: data.rays,
        values: data.values,
        value_tol: data.value_tol,
        zero_rays: zero.angles().to_vec(),
        one_rays: one.angles().to_vec(),
    })
}

pub fn cmd_roots(
    f: &PolyExpF64,
    target: C64,
    region: &Rect<f64>,
    r0: f64,
    sector: Option<Sector<f64>>,
    tol: f64,
) -> anyhow::Result<RootsReport> {
    let search = find_polyexp_a_points(f, target, region, tol)?;
    let sector = sector.map(|s| sector_report(&search.locations(), &s, r0)).transpose()?;
    Ok(RootsReport {
        target,
        region: search.region,
        winding: search.winding,
        clipped_area: search.clipped_area,
        total_multiplicity: search.total_multiplicity(),
        max_residual: search.roots.iter().map(|r| r.residual).fold(0.0, f64::max),
        holds: sector.as_ref().is_none_or(|s| s.holds()),
        roots: search.roots,
        sector,
    })
}

fn check(name: &str, points: impl IntoIterator<Item = C64>, ok: impl Fn(C64) -> bool) -> Check {
    let mut checked = 0;
    let mut violations = Vec::new();
    for z in points {
        checked += 1;
        if !ok(z) {
            violations.push(z);
        }
    }
    Check { name: name.into(), checked, holds: violations.is_empty(), violations }
}

fn certified(name: &str, r: &RootsReport, tol: f64) -> Check {
    let mut c = check(name, r.roots.iter().map(|x| x.location), |_| true);
    c.violations = r.roots.iter().filter(|x| !(x.residual < tol)).map(|x| x.location).collect();
    c.holds = c.violations.is_empty() && r.winding == Some(r.total_multiplicity);
    c
}

/// Residual bound `verify` demands of every root.
pub const VERIFY_RESIDUAL: f64 = 1e-9;

pub fn cmd_verify(example: &str, tol: f64) -> anyhow::Result<VerifyReport> {
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};
    let f = builtin::by_name::<f64>(example).ok_or_else(|| anyhow!("unknown example {example:?}"))?;
    let (half, region, radius) = match example {
        "1" | "example1" => (FRAC_PI_4, Rect::from_bounds(-8.0, -8.0, 8.0, 8.0)?, f64::INFINITY),
        "2" | "example2" => (FRAC_PI_6, Rect::from_bounds(-6.0, -6.0, 6.0, 6.0)?, 6.0),
        _ => bail!("verify covers examples 1 and 2"),
    };
    let r0 = 3.0;
    let zeros = cmd_roots(&f, Complex::new(0.0, 0.0), &region, r0, None, tol)?;
    let ones = cmd_roots(&f, Complex::new(1.0, 0.0), &region, r0, None, tol)?;
    let far = |r: &RootsReport| -> Vec<C64> {
        r.roots.iter().map(|x| x.location).filter(|z| z.norm() >= r0 && z.norm() <= radius).collect()
    };
    let zero_sector = Sector::new(0.0, half + SECTOR_SLACK)?;
    let mut checks = vec![
        certified("zeros certified", &zeros, VERIFY_RESIDUAL),
        certified("1-points certified", &ones, VERIFY_RESIDUAL),
        check("zeros: |arg z| < half-opening + 0.05", far(&zeros), |z| z.arg().abs() < zero_sector.half_opening),
    ];
    if half == FRAC_PI_4 {
        checks.push(check("1-points: |arg z − π| < π/4 + 0.05", far(&ones), |z| {
            (z.arg().abs() - PI).abs() < FRAC_PI_4 + SECTOR_SLACK
        }));
    } else {
        checks.push(check("1-points: Re z < 0.05·|z|", far(&ones), |z| z.re < SECTOR_SLACK * z.norm()));
    }
    let holds = checks.iter().all(|c| c.holds);
    Ok(VerifyReport { example: example.into(), zeros, one_points: ones, checks, holds })
}

pub fn cmd_kernel_check() -> anyhow::Result<KernelCheckReport> {
    let reports = kernel_params_grid::<f64>()?
        .iter()
        .map(|p: &KernelParams<f64>| kernel_report(p, 1e-12))
        .collect::<sectorroots::Result<Vec<_>>>()?;
    let max_abs_diff = reports.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    Ok(KernelCheckReport { reports, max_abs_diff, tolerance: KERNEL_TOL, holds: max_abs_diff < KERNEL_TOL })
}

pub fn cmd_order(f: &PolyExpF64, rgrid: &[f64], tol: f64) -> anyhow::Result<OrderReport> {
    let g = TargetedFunction::with_default_snap(f, Complex::new(0.0, 0.0))?;
    let order = sectorroots::order_estimate(&g, rgrid, LOG_M_SAMPLES, tol)?;
    let log_m = rgrid.iter().map(|&r| log_max_modulus(&g, r, LOG_M_SAMPLES, tol)).collect::<sectorroots::Result<_>>()?;
    Ok(OrderReport { radii: rgrid.to_vec(), log_m, order })
}

pub fn cmd_counting(f: &PolyExpF64, target: C64, rgrid: &[f64], tol: f64) -> anyhow::Result<CountingReport> {
    let rmax = rgrid.iter().cloned().fold(f64::NAN, f64::max);
    if !(rmax > 0.0) {
        bail!("--rgrid needs positive radii");
    }
    let region = Rect::from_bounds(-rmax, -rmax, rmax, rmax)?;
    let search = find_polyexp_a_points(f, target, &region, tol)?;
    let g = TargetedFunction::with_default_snap(f, target)?;
    let log_m = rgrid.iter().map(|&r| log_max_modulus(&g, r, LOG_M_SAMPLES, tol)).collect::<sectorroots::Result<Vec<_>>>()?;
    let table = counting_functions(&search.roots, &log_m, rgrid)?;
    let jensen = if target == Complex::new(0.0, 0.0) {
        rgrid
            .iter()
            .map(|&r| jensen_check(&g, &search.roots, r, JENSEN_SAMPLES, tol))
            .collect::<sectorroots::Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(CountingReport { target, table, jensen })
}

pub fn cmd_product(a: &ProductArgs, tol: f64) -> anyhow::Result<ProductReport> {
    let p = CanonicalProduct::new(a.rho, a.nterms)?;
    let value = a.eval.map(|z| p.eval(z)).transpose()?;
    let points = match &a.region {
        None => None,
        Some(region) => {
            let [r0, r1] = match a.annulus.as_slice() {
                [r0, r1] if r0 < r1 => [*r0, *r1],
                _ => bail!("--annulus expects R0,R1 with R0 < R1"),
            };
            let rays = canonical_one_point_rays(a.rho)?;
            let search = find_a_points(&p, a.target, region, tol)?;
            let max_deviation = search
                .roots
                .iter()
                .map(|r| r.location)
                .filter(|z| z.norm() >= r0 && z.norm() <= r1)
                .map(|z| {
                    rays.angles().iter().map(|&phi| sectorroots::scalar::angular_distance(z.arg(), phi)).fold(f64::INFINITY, f64::min)
                })
                .reduce(f64::max);
            Some(ProductPoints {
                target: a.target,
                rays: rays.angles().to_vec(),
                annulus: [r0, r1],
                holds: max_deviation.is_none_or(|d| d <= PRODUCT_ANGLE_TOL),
                roots: search.roots,
                max_deviation,
                angle_tol: PRODUCT_ANGLE_TOL,
            })
        }
    };
    Ok(ProductReport { rho: a.rho, n_terms: a.nterms, r_max: p.r_max(), eval_at: a.eval, value, points })
}

/// Human-readable summary for stdout.
pub fn render(report: &Report) -> String {
    let mut s = String::new();
    let c = |z: &C64| format!("{:+.12} {:+.12}i", z.re, z.im);
    match report {
        Report::Rays(r) => {
            let _ = writeln!(s, "d = {}, A = {}", r.d, c(&r.leading));
            for (phi, a) in r.rays.iter().zip(&r.values) {
                let _ = writeln!(s, "phi = {phi:.12}  a = {}", c(a));
            }
            let _ = writeln!(s, "zero rays: {:?}\none rays: {:?}", r.zero_rays, r.one_rays);
        }
        Report::Roots(r) => render_roots(&mut s, r),
        Report::Verify(r) => {
            let _ = writeln!(s, "example {}: {} zeros, {} 1-points", r.example, r.zeros.total_multiplicity, r.one_points.total_multiplicity);
            for ch in &r.checks {
                let _ = writeln!(s, "{:<44} {:>4} checked  {}", ch.name, ch.checked, if ch.holds { "ok" } else { "VIOLATED" });
            }
        }
        Report::Enumerate(r) => {
            let _ = writeln!(s, "dmax = {}, {} configurations, {} violations", r.dmax, r.configs_checked, r.violations.len());
            for v in &r.violations {
                let _ = writeln!(s, "  {}: d = {}, arg A = {}, {:?}", v.check, v.d, v.arg_a, v.assignment);
            }
        }
        Report::KernelCheck(r) => {
            let _ = writeln!(s, "{:>6} {:>6} {:>20} {:>20} {:>10}", "eps", "delta", "residue", "quadrature", "diff");
            for k in &r.reports {
                let _ = writeln!(s, "{:>6} {:>6} {:>20.15} {:>20.15} {:>10.2e}", k.eps, k.delta, k.residue, k.quadrature, k.abs_diff);
            }
            let _ = writeln!(s, "max |residue - quadrature| = {:.3e}", r.max_abs_diff);
        }
        Report::Order(r) => {
            for (x, m) in r.radii.iter().zip(&r.log_m) {
                let _ = writeln!(s, "r = {x:<8} log M = {m:.10}");
            }
            let _ = writeln!(s, "order ≈ {:.6}", r.order);
        }
        Report::Counting(r) => {
            let t = &r.table;
            let _ = writeln!(s, "{:>8} {:>5} {:>14} {:>14} {:>14}", "r", "n", "N", "logM", "slack");
            for i in 0..t.radii.len() {
                let _ = writeln!(s, "{:>8} {:>5} {:>14.8} {:>14.8} {:>14.8}", t.radii[i], t.n[i], t.big_n[i], t.log_m[i], t.slack[i]);
            }
            for j in &r.jensen {
                let _ = writeln!(s, "jensen r = {}: residual {:.3e} (from 0: {:.3e})", j.r, j.residual(), j.residual_from_zero());
            }
        }
        Report::Product(r) => {
            let _ = writeln!(s, "rho = {}, {} factors, r_max = {:.4e}", r.rho, r.n_terms, r.r_max);
            if let (Some(z), Some(v)) = (&r.eval_at, &r.value) {
                let _ = writeln!(s, "P({}) = {}", c(z), c(v));
            }
            if let Some(p) = &r.points {
                let _ = writeln!(s, "{} points, max deviation from {:?}: {:?}", p.roots.len(), p.rays, p.max_deviation);
            }
        }
    }
    s
}

fn render_roots(s: &mut String, r: &RootsReport) {
    let _ = writeln!(s, "{:>22} {:>22} {:>10} {:>4}", "re", "im", "residual", "m");
    for x in &r.roots {
        let _ = writeln!(s, "{:>22.15} {:>22.15} {:>10.2e} {:>4}", x.location.re, x.location.im, x.residual, x.multiplicity);
    }
    let _ = writeln!(s, "total multiplicity {} (winding {:?})", r.total_multiplicity, r.winding);
    if let Some(sec) = &r.sector {
        let _ = writeln!(s, "outside sector for |z| >= {}: {}", sec.r0, sec.outside.len());
    }
}

fn write_dat(path: &Path, header: &str, rows: impl IntoIterator<Item = String>) -> anyhow::Result<()> {
    let mut text = format!("# {header}\n");
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn roots_files(dir: &Path, stem: &str, roots: &[RootRecord<f64>]) -> anyhow::Result<()> {
    let file = fs::File::create(dir.join(format!("{stem}.csv")))?;
    write_roots_csv(roots, file)?;
    write_dat(
        &dir.join(format!("{stem}.dat")),
        "re im multiplicity",
        roots.iter().map(|r| format!("{} {} {}", r.location.re, r.location.im, r.multiplicity)),
    )
}

/// `report.json` plus CSV and gnuplot data files for the report.
pub fn write_outputs(dir: &Path, report: &Report) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("report.json"), report.to_json())?;
    match report {
        Report::Rays(r) => write_dat(
            &dir.join("rays.dat"),
            "phi cos sin re_a im_a",
            r.rays.iter().zip(&r.values).map(|(p, a)| format!("{p} {} {} {} {}", p.cos(), p.sin(), a.re, a.im)),
        )?,
        Report::Roots(r) => roots_files(dir, "roots", &r.roots)?,
        Report::Verify(r) => {
            roots_files(dir, "zeros", &r.zeros.roots)?;
            roots_files(dir, "ones", &r.one_points.roots)?;
        }
        Report::Enumerate(_) => {}
        Report::KernelCheck(r) => write_dat(
            &dir.join("kernel.dat"),
            "eps delta residue quadrature abs_diff",
            r.reports.iter().map(|k| format!("{} {} {} {} {}", k.eps, k.delta, k.residue, k.quadrature, k.abs_diff)),
        )?,
        Report::Order(r) => write_dat(
            &dir.join("order.dat"),
            "r logM",
            r.radii.iter().zip(&r.log_m).map(|(x, m)| format!("{x} {m}")),
        )?,
        Report::Counting(r) => {
            write_counting_csv(&r.table, fs::File::create(dir.join("counting.csv"))?)?;
            let t = &r.table;
            write_dat(
                &dir.join("counting.dat"),
                "r n N logM slack",
                (0..t.radii.len()).map(|i| format!("{} {} {} {} {}", t.radii[i], t.n[i], t.big_n[i], t.log_m[i], t.slack[i])),
            )?;
        }
        Report::Product(r) => {
            if let Some(p) = &r.points {
                roots_files(dir, "product_points", &p.roots)?;
            }
        }
    }
    Ok(())
}
