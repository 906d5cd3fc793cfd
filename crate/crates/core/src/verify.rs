//! Numerical property checks.
//!
//! Every check returns a [`CheckReport`]: one row per sample with a signed
//! residual (positive beyond the tolerance means violated), and the report
//! passes exactly when the worst residual is within tolerance.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dimest::{dyadic_box_counts, minkowski_estimate, Window};
use crate::harmonic::harnack_interval;
use crate::ifs::RenderMethod;
use crate::io::fmt_f64;
use crate::motion::{fmt_lambda, Address, AstalaMotion, MotionFamily};
use crate::{require_in_disk, ComplexPoint, Error, Result};

/// Trapezoid-rule samples on each circle.
pub const CIRCLE_SAMPLES: usize = 360;
/// Inflation applied to the sampled diameter supremum.
pub const DIAMETER_INFLATION: f64 = 1.1;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub param: String,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Row with the largest residual.
    pub worst: CheckRow,
    pub samples: usize,
    pub tolerance: f64,
    pub rows: Vec<CheckRow>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn from_rows(name: &str, tolerance: f64, rows: Vec<(String, f64)>, notes: Vec<String>) -> Self {
        let rows: Vec<CheckRow> = rows
            .into_iter()
            .map(|(param, residual)| CheckRow { param, residual, passed: residual <= tolerance })
            .collect();
        let worst = rows
            .iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
            .cloned()
            .unwrap_or(CheckRow { param: "none".into(), residual: f64::NEG_INFINITY, passed: true });
        CheckReport {
            name: name.to_string(),
            passed: rows.iter().all(|r| r.passed),
            worst,
            samples: rows.len(),
            tolerance,
            rows,
            notes,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "check: {}", self.name);
        let _ = writeln!(s, "status: {}", if self.passed { "PASS" } else { "FAIL" });
        let _ = writeln!(s, "samples: {}", self.samples);
        let _ = writeln!(s, "tolerance: {}", fmt_f64(self.tolerance));
        let _ = writeln!(s, "worst: {} residual={}", self.worst.param, fmt_f64(self.worst.residual));
        for note in &self.notes {
            let _ = writeln!(s, "note: {note}");
        }
        s
    }

    /// `check,param,residual,tolerance,passed` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("check,param,residual,tolerance,passed\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                self.name,
                r.param,
                fmt_f64(r.residual),
                fmt_f64(self.tolerance),
                r.passed
            );
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanValueMode {
    /// `|mean − f(λ0)| ≤ tol`
    Harmonic,
    /// `mean ≤ f(λ0) + tol`
    Super,
    /// `mean ≥ f(λ0) − tol`
    Sub,
}

/// Trapezoid-rule mean of `f` over the circle `|λ − λ0| = radius`.
pub fn circle_mean(f: &dyn Fn(ComplexPoint) -> f64, center: ComplexPoint, radius: f64, samples: usize) -> f64 {
    (0..samples)
        .map(|i| f(center + Complex64::from_polar(radius, 2.0 * PI * i as f64 / samples as f64)))
        .sum::<f64>()
        / samples as f64
}

fn mean_value_residual(
    f: &dyn Fn(ComplexPoint) -> f64,
    center: ComplexPoint,
    radius: f64,
    samples: usize,
    mode: MeanValueMode,
) -> Result<f64> {
    if samples < 64 {
        return Err(Error::InvalidInput(format!("need at least 64 circle samples, got {samples}")));
    }
    if !(radius > 0.0) || center.norm() + radius >= 1.0 {
        return Err(Error::CircleOutsideDomain { center: center.norm(), radius });
    }
    let mean = circle_mean(f, center, radius, samples);
    let f0 = f(center);
    Ok(match mode {
        MeanValueMode::Harmonic => (mean - f0).abs(),
        MeanValueMode::Super => mean - f0,
        MeanValueMode::Sub => f0 - mean,
    })
}

/// Mean-value test of `f` on one circle.
pub fn check_mean_value(
    f: &dyn Fn(ComplexPoint) -> f64,
    center: ComplexPoint,
    radius: f64,
    samples: usize,
    tol: f64,
    mode: MeanValueMode,
) -> Result<CheckReport> {
    check_mean_value_grid(f, &[center], radius, samples, tol, mode)
}

/// Mean-value test of `f` on circles of a common radius about each center.
pub fn check_mean_value_grid(
    f: &dyn Fn(ComplexPoint) -> f64,
    centers: &[ComplexPoint],
    radius: f64,
    samples: usize,
    tol: f64,
    mode: MeanValueMode,
) -> Result<CheckReport> {
    let rows = centers
        .iter()
        .map(|&c| Ok((format!("lambda0={};r={}", fmt_lambda(c), radius), mean_value_residual(f, c, radius, samples, mode)?)))
        .collect::<Result<Vec<_>>>()?;
    let name = match mode {
        MeanValueMode::Harmonic => "mean-value-harmonic",
        MeanValueMode::Super => "mean-value-super",
        MeanValueMode::Sub => "mean-value-sub",
    };
    Ok(CheckReport::from_rows(name, tol, rows, Vec::new()))
}

/// `count` points uniformly distributed in the disk `|λ| ≤ max_modulus`.
pub fn random_disk_points(count: usize, max_modulus: f64, seed: u64) -> Vec<ComplexPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = max_modulus * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
        })
        .collect()
}

/// `N×N` square mesh over `[−m, m]²` clipped to `|λ| ≤ m`.
pub fn square_grid(n: usize, max_modulus: f64) -> Vec<ComplexPoint> {
    let step = |i: usize| {
        if n == 1 {
            0.0
        } else {
            -max_modulus + 2.0 * max_modulus * i as f64 / (n - 1) as f64
        }
    };
    let mut pts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = Complex64::new(step(j), step(i));
            if p.norm() <= max_modulus {
                pts.push(p);
            }
        }
    }
    pts
}

/// Harnack inequality for a positive (inf-)harmonic `u` on random pairs in
/// `|λ| ≤ max_modulus`: `u(λ1)` must lie in `[u(λ2)/τ, u(λ2)·τ]`.
pub fn check_harnack_pairs(
    u: &dyn Fn(ComplexPoint) -> f64,
    pairs: usize,
    max_modulus: f64,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let pts = random_disk_points(2 * pairs, max_modulus, seed);
    let rows = pts
        .chunks(2)
        .map(|p| {
            let (l1, l2) = (p[0], p[1]);
            let (lo, hi) = harnack_interval(u(l2), l1, l2)?;
            let v = u(l1);
            Ok((format!("{}|{}", fmt_lambda(l1), fmt_lambda(l2)), (lo - v).max(v - hi)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::from_rows("harnack-pairs", tol, rows, Vec::new()))
}

/// Configuration of [`check_diameter_harnack`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiameterCheck {
    /// Radius of the disk on which `log(M/diam f_λ(S))` is inf-harmonic.
    pub rho: f64,
    /// Radius used to form the bounds; equal to `rho` for the genuine check.
    /// A larger value tightens the interval and serves as a negative control.
    pub bound_rho: f64,
    pub tol: f64,
}

impl DiameterCheck {
    pub fn new(rho: f64) -> Self {
        DiameterCheck { rho, bound_rho: rho, tol: 1e-9 }
    }
}

fn subset_diameter(points: &[ComplexPoint]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.max((points[i] - points[j]).norm());
        }
    }
    d
}

/// Diameter distortion of the finite subset named by `addresses`:
/// `log(M/diam f_λ(S)) / log(M/diam S)` must lie in
/// `[(ρ−|λ|)/(ρ+|λ|), (ρ+|λ|)/(ρ−|λ|)]`.
///
/// `M` is taken as [`DIAMETER_INFLATION`] times the largest diameter seen on
/// the grid and on [`CIRCLE_SAMPLES`] points of `|λ| = ρ`. Each pairwise
/// distance is the modulus of a holomorphic function of `λ`, so the
/// supremum over the closed disk sits on that circle; inflating the sampled
/// maximum covers the gaps between samples.
pub fn check_diameter_harnack(
    m: &AstalaMotion,
    addresses: &[Address],
    lambda_grid: &[ComplexPoint],
    cfg: DiameterCheck,
) -> Result<CheckReport> {
    if addresses.len() < 2 {
        return Err(Error::DegenerateSubset);
    }
    if !(cfg.rho > 0.0 && cfg.rho < 1.0) {
        return Err(Error::InvalidInput(format!("rho = {} must lie in (0, 1)", cfg.rho)));
    }
    if let Some(l) = lambda_grid.iter().find(|l| l.norm() >= cfg.rho) {
        return Err(Error::InvalidInput(format!("grid point {} outside D(0, rho)", fmt_lambda(*l))));
    }
    let diam_at = |l: ComplexPoint| -> Result<f64> {
        let pts = addresses.iter().map(|a| m.point_image(a, l)).collect::<Result<Vec<_>>>()?;
        Ok(subset_diameter(&pts))
    };
    let base = diam_at(Complex64::new(0.0, 0.0))?;
    if base == 0.0 {
        return Err(Error::DegenerateSubset);
    }
    let circle = (0..CIRCLE_SAMPLES).map(|i| Complex64::from_polar(cfg.rho, 2.0 * PI * i as f64 / CIRCLE_SAMPLES as f64));
    let mut sup = base;
    for l in lambda_grid.iter().copied().chain(circle) {
        sup = sup.max(diam_at(l)?);
    }
    let big_m = DIAMETER_INFLATION * sup;
    let denom = (big_m / base).ln();
    let rows = lambda_grid
        .iter()
        .map(|&l| {
            let ratio = (big_m / diam_at(l)?).ln() / denom;
            let t = l.norm();
            let lo = (cfg.bound_rho - t) / (cfg.bound_rho + t);
            Ok((format!("lambda={}", fmt_lambda(l)), (lo - ratio).max(ratio - 1.0 / lo)))
        })
        .collect::<Result<Vec<_>>>()?;
    let notes = vec![format!(
        "M = {} x sampled supremum of diam f_lambda(S) over the grid and |lambda| = {}; any M above the true supremum keeps the bound valid",
        DIAMETER_INFLATION, cfg.rho
    )];
    Ok(CheckReport::from_rows("diameter-harnack", cfg.tol, rows, notes))
}

/// Dimension sandwich at `|λ| = k`: with `x(λ) = 1/s(λ) − 1/2` and
/// `K = (1+k)/(1−k)`, `x(λ) ∈ [x(0)/K, K·x(0)]` on 8 equally spaced points
/// of each circle.
pub fn check_distortion_sandwich(m: &dyn MotionFamily, k_grid: &[f64], tol: f64) -> Result<CheckReport> {
    const POINTS: usize = 8;
    let x0 = 1.0 / m.dimension(Complex64::new(0.0, 0.0))? - 0.5;
    let mut rows = Vec::new();
    for &k in k_grid {
        if !(0.0..=0.95).contains(&k) {
            return Err(Error::KOutOfRange(k));
        }
        let big_k = (1.0 + k) / (1.0 - k);
        for j in 0..POINTS {
            let l = Complex64::from_polar(k, 2.0 * PI * j as f64 / POINTS as f64);
            let x = 1.0 / m.dimension(l)? - 0.5;
            rows.push((format!("k={k};lambda={}", fmt_lambda(l)), (x0 / big_k - x).max(x - big_k * x0)));
        }
    }
    Ok(CheckReport::from_rows("distortion-sandwich", tol, rows, Vec::new()))
}

/// Outcome of [`run_qsh_experiment`].
#[derive(Clone, Debug, PartialEq)]
pub struct QshOutcome {
    pub report: CheckReport,
    pub dim_at_origin: f64,
    pub max_on_circle: f64,
    pub argmax: ComplexPoint,
    /// `max_{|λ|=1/2} s(λ) − s(0)`.
    pub margin: f64,
}

/// Compares `s(0)` with the largest dimension on `|λ| = 1/2`.
pub fn run_qsh_experiment(m: &dyn MotionFamily, circle_samples: usize) -> Result<QshOutcome> {
    if circle_samples < 16 {
        return Err(Error::InvalidInput(format!("need at least 16 circle samples, got {circle_samples}")));
    }
    let s0 = m.dimension(Complex64::new(0.0, 0.0))?;
    let mut best = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
    for j in 0..circle_samples {
        let l = Complex64::from_polar(0.5, 2.0 * PI * j as f64 / circle_samples as f64);
        let s = m.dimension(l)?;
        if s > best.0 {
            best = (s, l);
        }
    }
    let margin = best.0 - s0;
    let notes = vec![
        format!("dim(0) = {}, max over |lambda|=1/2 = {} at {}", fmt_f64(s0), fmt_f64(best.0), fmt_lambda(best.1)),
        format!("margin = {}", fmt_f64(margin)),
        "these motions have harmonic reciprocal dimension, so log-subharmonicity already forces the inequality; this run exercises the machinery and is not evidence on the open question".into(),
    ];
    let report = CheckReport::from_rows(
        "qsh-experiment",
        1e-12,
        vec![(format!("circle_samples={circle_samples}"), -margin)],
        notes,
    );
    Ok(QshOutcome { report, dim_at_origin: s0, max_on_circle: best.0, argmax: best.1, margin })
}

/// Box-counting settings used by [`check_estimator_vs_theory`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorConfig {
    pub k_min: u32,
    pub k_max: u32,
    pub window: Window,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig { k_min: 0, k_max: 40, window: Window::auto() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub lambda: ComplexPoint,
    pub theory: f64,
    pub estimate: f64,
}

/// `re,im,dim_theory,dim_est` rows with a header line.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("re,im,dim_theory,dim_est\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_f64(r.lambda.re),
            fmt_f64(r.lambda.im),
            fmt_f64(r.theory),
            fmt_f64(r.estimate)
        );
    }
    s
}

/// Renders the motion at each `λ`, estimates the box-counting dimension and
/// compares it with the closed form.
pub fn check_estimator_vs_theory(
    m: &dyn MotionFamily,
    lambda_grid: &[ComplexPoint],
    render: RenderMethod,
    est: EstimatorConfig,
    tol: f64,
) -> Result<(CheckReport, Vec<SweepRow>)> {
    let sweep = lambda_grid
        .par_iter()
        .map(|&l| {
            require_in_disk(l)?;
            let cloud = m.render(l, render)?;
            let counts = dyadic_box_counts(&cloud, est.k_min, est.k_max)?;
            let estimate = minkowski_estimate(&counts, est.window)?.value;
            Ok(SweepRow { lambda: l, theory: m.dimension(l)?, estimate })
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = sweep
        .iter()
        .map(|r| (format!("lambda={}", fmt_lambda(r.lambda)), (r.estimate - r.theory).abs()))
        .collect();
    let notes = vec![format!("{} on {}", render.label(), m.describe())];
    Ok((CheckReport::from_rows("estimator-vs-theory", tol, rows, notes), sweep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{HarmonicFn, InfHarmonicFn};
    use crate::ifs::SimilarityIFS;
    use crate::motion::{build_astala_motion, StaticMotion};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mean_value_examples() {
        let h = HarmonicFn::affine(1.0, 0.0, 1.0);
        let f = |l: ComplexPoint| h.value_at(l);
        let r = check_mean_value(&f, c(0.2, 0.1), 0.5, 360, 1e-12, MeanValueMode::Harmonic).unwrap();
        assert!(r.passed, "{}", r.to_text());

        let u = InfHarmonicFn::new(vec![HarmonicFn::affine(1.0, 0.0, 1.0), HarmonicFn::affine(-1.0, 0.0, 1.0)]).unwrap();
        let g = |l: ComplexPoint| u.eval(l).unwrap();
        assert!(check_mean_value(&g, c(0.0, 0.0), 0.5, 360, 1e-9, MeanValueMode::Super).unwrap().passed);
        assert!(!check_mean_value(&g, c(0.0, 0.0), 0.5, 360, 1e-9, MeanValueMode::Harmonic).unwrap().passed);

        let sq = |l: ComplexPoint| l.norm_sqr();
        let r = check_mean_value(&sq, c(0.0, 0.0), 0.5, 360, 1e-9, MeanValueMode::Harmonic).unwrap();
        assert!(!r.passed);
        assert!((r.worst.residual - 0.25).abs() < 1e-12);
    }

    #[test]
    fn mean_value_errors() {
        let f = |_: ComplexPoint| 1.0;
        assert!(matches!(
            check_mean_value(&f, c(0.6, 0.0), 0.5, 360, 1e-9, MeanValueMode::Harmonic),
            Err(Error::CircleOutsideDomain { .. })
        ));
        assert!(check_mean_value(&f, c(0.0, 0.0), 0.5, 10, 1e-9, MeanValueMode::Harmonic).is_err());
    }

    #[test]
    fn grids() {
        let g = square_grid(5, 0.95);
        assert!(g.iter().all(|p| p.norm() <= 0.95));
        assert!(g.contains(&c(0.0, 0.0)));
        assert_eq!(random_disk_points(10, 0.9, 1), random_disk_points(10, 0.9, 1));
        assert!(random_disk_points(100, 0.9, 1).iter().all(|p| p.norm() <= 0.9));
    }

    #[test]
    fn harnack_pairs_on_envelope() {
        let u = InfHarmonicFn::new(vec![HarmonicFn::affine(1.0, 0.0, 1.0), HarmonicFn::trig_poly(1.0, vec![0.0, 0.5], vec![0.3])]).unwrap();
        let f = |l: ComplexPoint| u.eval(l).unwrap();
        assert!(check_harnack_pairs(&f, 100, 0.9, 5, 1e-12).unwrap().passed);
        // |λ|² + 0.01 is positive but not superharmonic enough: fails somewhere
        let g = |l: ComplexPoint| l.norm_sqr() + 0.01;
        assert!(!check_harnack_pairs(&g, 100, 0.9, 5, 1e-12).unwrap().passed);
    }

    #[test]
    fn sandwich_examples() {
        let m = build_astala_motion(HarmonicFn::affine(1.0, 0.0, 1.0), 10).unwrap();
        let r = check_distortion_sandwich(&m, &[0.5], 1e-9).unwrap();
        assert!(r.passed);
        assert!(r.worst.param.starts_with("k=0.5;lambda=-0.5"), "{}", r.worst.param);
        let m = build_astala_motion(HarmonicFn::constant(1.0), 10).unwrap();
        assert!(check_distortion_sandwich(&m, &[0.0, 0.3, 0.9], 1e-9).unwrap().passed);
        assert!(check_distortion_sandwich(&m, &[0.97], 1e-9).is_err());
    }

    #[test]
    fn qsh_examples() {
        let m = build_astala_motion(HarmonicFn::constant(1.0), 10).unwrap();
        let q = run_qsh_experiment(&m, 16).unwrap();
        assert!(q.report.passed && q.margin.abs() < 1e-12);
        let m = build_astala_motion(HarmonicFn::affine(1.0, 0.0, 1.0), 10).unwrap();
        let q = run_qsh_experiment(&m, 16).unwrap();
        assert!(q.report.passed);
        assert!((q.argmax - c(-0.5, 0.0)).norm() < 1e-12);
        assert!((q.margin - 0.263305).abs() < 1e-6);
        assert!(run_qsh_experiment(&m, 8).is_err());
    }

    #[test]
    fn diameter_check_configurations() {
        let grid: Vec<ComplexPoint> = square_grid(7, 0.5);
        let m = build_astala_motion(HarmonicFn::constant(1.0), 10).unwrap();
        let s = [Address::fixed(0), Address::fixed(5)];
        let r = check_diameter_harnack(&m, &s, &grid, DiameterCheck::new(0.9)).unwrap();
        assert!(r.passed, "{}", r.to_text());
        assert!(r.rows.iter().all(|row| row.residual <= 0.0));

        let m = build_astala_motion(HarmonicFn::affine(1.0, 0.0, 1.0), 10).unwrap();
        let s = [Address::fixed(0), Address::new(vec![0], 1)];
        let r = check_diameter_harnack(&m, &s, &grid, DiameterCheck::new(0.9)).unwrap();
        assert!(r.passed, "{}", r.to_text());
        let tight = DiameterCheck { bound_rho: 3.6, ..DiameterCheck::new(0.9) };
        let r = check_diameter_harnack(&m, &s, &grid, tight).unwrap();
        assert!(!r.passed);

        assert!(matches!(check_diameter_harnack(&m, &s[..1], &grid, DiameterCheck::new(0.9)), Err(Error::DegenerateSubset)));
        let same = [Address::fixed(2), Address::fixed(2)];
        assert!(matches!(check_diameter_harnack(&m, &same, &grid, DiameterCheck::new(0.9)), Err(Error::DegenerateSubset)));
    }

    #[test]
    fn estimator_on_cantor() {
        let cantor = StaticMotion::new(SimilarityIFS::cantor()).unwrap();
        let (r, rows) = check_estimator_vs_theory(
            &cantor,
            &[c(0.0, 0.0)],
            RenderMethod::Deterministic { depth: 12 },
            EstimatorConfig::default(),
            0.05,
        )
        .unwrap();
        assert!(r.passed, "{rows:?}");
        assert!(sweep_csv(&rows).starts_with("re,im,dim_theory,dim_est\n"));
    }

    #[test]
    fn report_csv_shape() {
        let r = CheckReport::from_rows("x", 0.1, vec![("a".into(), 0.0), ("b".into(), 0.2)], vec![]);
        assert!(!r.passed);
        assert_eq!(r.worst.param, "b");
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "check,param,residual,tolerance,passed");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].ends_with(",false"));
    }
}
