//! Box-counting and packing dimension estimators.
//!
//! Both estimators produce a [`ScaleCounts`] table and fit the slope of
//! `log₂ count` against `log₂(1/δ)` by least squares over a window of scales.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ifs::PointCloud;
use crate::{Error, Result};

/// Finest dyadic level whose cell indices are exact in `f64`.
pub const MAX_DYADIC_LEVEL: u32 = 52;
/// Default exponent of the sample-saturation guard.
pub const SATURATION_EXPONENT: f64 = 0.8;
/// Coarsest scales dropped by the automatic window.
pub const DROP_COARSE: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleKind {
    /// Scale is the dyadic level `k` (box side `2^{-k}`).
    Dyadic,
    /// Scale is the disk diameter `δ`.
    Packing,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleCount {
    pub scale: f64,
    pub count: u64,
}

impl ScaleCount {
    /// `log₂(1/δ)`: the regression abscissa.
    pub fn log_inverse_scale(&self, kind: ScaleKind) -> f64 {
        match kind {
            ScaleKind::Dyadic => self.scale,
            ScaleKind::Packing => -self.scale.log2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleCounts {
    pub kind: ScaleKind,
    pub entries: Vec<ScaleCount>,
    /// Distinct points in the cloud the counts came from.
    pub sample_size: usize,
}

impl ScaleCounts {
    pub fn new(kind: ScaleKind, entries: Vec<ScaleCount>, sample_size: usize) -> Self {
        ScaleCounts { kind, entries, sample_size }
    }

    /// `(log₂(1/δ), log₂ count)` pairs, coarsest scale first.
    pub fn log_points(&self) -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = self
            .entries
            .iter()
            .map(|e| (e.log_inverse_scale(self.kind), (e.count as f64).log2()))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Window {
    /// Drop the coarsest scales and every scale whose count exceeds
    /// `sample_size^saturation_exponent`.
    Auto { saturation_exponent: f64, drop_coarse: usize },
    /// Keep scales with `lo ≤ log₂(1/δ) ≤ hi`.
    Range { lo: f64, hi: f64 },
}

impl Window {
    pub fn auto() -> Self {
        Window::Auto { saturation_exponent: SATURATION_EXPONENT, drop_coarse: DROP_COARSE }
    }

    pub fn levels(lo: u32, hi: u32) -> Self {
        Window::Range { lo: lo as f64, hi: hi as f64 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub value: f64,
    /// Range of `log₂(1/δ)` used by the fit.
    pub window: (f64, f64),
    pub scales_used: usize,
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub intercept: f64,
    pub per_scale_local_slopes: Vec<f64>,
}

impl DimensionEstimate {
    /// Smallest local slope in the window; a crude lower-dimension diagnostic.
    pub fn lower_diagnostic(&self) -> f64 {
        self.per_scale_local_slopes.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Number of occupied half-open dyadic squares
/// `[m2^{-k}, (m+1)2^{-k}) × [n2^{-k}, (n+1)2^{-k})` at each level
/// `k_min..=k_max`.
pub fn dyadic_box_counts(cloud: &PointCloud, k_min: u32, k_max: u32) -> Result<ScaleCounts> {
    if cloud.is_empty() {
        return Err(Error::DegenerateCloud);
    }
    if k_max > MAX_DYADIC_LEVEL {
        return Err(Error::ScaleOverflow(k_max));
    }
    if k_min > k_max {
        return Err(Error::InvalidInput(format!("k_min {k_min} exceeds k_max {k_max}")));
    }
    let extent = cloud
        .points
        .iter()
        .map(|p| p.re.abs().max(p.im.abs()))
        .fold(0.0, f64::max);
    if !extent.is_finite() {
        return Err(Error::NonFinite("cloud coordinate".into()));
    }
    // cell indices must stay well inside i64
    if extent * 2f64.powi(k_max as i32) >= 2f64.powi(62) {
        return Err(Error::ScaleOverflow(k_max));
    }
    let entries = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            let scale = 2f64.powi(k as i32);
            let cells: HashSet<(i64, i64)> = cloud
                .points
                .iter()
                .map(|p| ((p.re * scale).floor() as i64, (p.im * scale).floor() as i64))
                .collect();
            ScaleCount { scale: k as f64, count: cells.len() as u64 }
        })
        .collect();
    Ok(ScaleCounts::new(ScaleKind::Dyadic, entries, cloud.distinct_count()))
}

/// Greedy packing counts: points are scanned in cloud order and a disk of
/// diameter `δ` centred at a point is accepted when it is disjoint from
/// every disk accepted so far. The count is a lower bound for the optimal
/// packing number.
pub fn packing_counts(cloud: &PointCloud, diameters: &[f64]) -> Result<ScaleCounts> {
    if cloud.is_empty() {
        return Err(Error::DegenerateCloud);
    }
    if let Some(d) = diameters.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(Error::InvalidInput(format!("diameter {d} must be positive")));
    }
    if diameters.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidInput("diameters must be sorted in descending order".into()));
    }
    let entries = diameters
        .par_iter()
        .map(|&delta| ScaleCount { scale: delta, count: greedy_packing(&cloud.points, delta) })
        .collect();
    Ok(ScaleCounts::new(ScaleKind::Packing, entries, cloud.distinct_count()))
}

fn greedy_packing(points: &[Complex64], delta: f64) -> u64 {
    let key = |p: &Complex64| ((p.re / delta).floor() as i64, (p.im / delta).floor() as i64);
    let mut accepted: HashMap<(i64, i64), Vec<Complex64>> = HashMap::new();
    let mut count = 0u64;
    for p in points {
        let (kx, ky) = key(p);
        let blocked = (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                accepted
                    .get(&(kx + dx, ky + dy))
                    .is_some_and(|cell| cell.iter().any(|q| (p - q).norm() <= delta))
            })
        });
        if !blocked {
            accepted.entry((kx, ky)).or_default().push(*p);
            count += 1;
        }
    }
    count
}

fn select_window(counts: &ScaleCounts, window: Window) -> Vec<(f64, f64)> {
    let pts = counts.log_points();
    match window {
        Window::Auto { saturation_exponent, drop_coarse } => {
            let cap = (counts.sample_size as f64).powf(saturation_exponent).log2();
            pts.into_iter().skip(drop_coarse).filter(|&(_, y)| y <= cap).collect()
        }
        Window::Range { lo, hi } => pts.into_iter().filter(|&(x, _)| x >= lo && x <= hi).collect(),
    }
}

fn fit(pts: &[(f64, f64)]) -> Result<DimensionEstimate> {
    let m = pts.len();
    if m < 3 {
        return Err(Error::WindowTooSmall(m));
    }
    let mf = m as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / mf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::WindowTooSmall(1));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    let slope_stderr = (sse / (mf - 2.0) / sxx).sqrt();
    let per_scale_local_slopes = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    Ok(DimensionEstimate {
        value: slope,
        window: (pts[0].0, pts[m - 1].0),
        scales_used: m,
        slope_stderr,
        r_squared,
        intercept,
        per_scale_local_slopes,
    })
}

fn estimate(counts: &ScaleCounts, window: Window) -> Result<DimensionEstimate> {
    if counts.sample_size < 2 {
        return Err(Error::DegenerateCloud);
    }
    fit(&select_window(counts, window))
}

/// Least-squares slope of `log₂ N_k` against `k` (upper Minkowski dimension).
pub fn minkowski_estimate(counts: &ScaleCounts, window: Window) -> Result<DimensionEstimate> {
    if counts.kind != ScaleKind::Dyadic {
        return Err(Error::InvalidInput("box estimate needs dyadic counts".into()));
    }
    estimate(counts, window)
}

/// Least-squares slope of `log₂ M_δ` against `log₂(1/δ)`.
pub fn packing_estimate(counts: &ScaleCounts, window: Window) -> Result<DimensionEstimate> {
    if counts.kind != ScaleKind::Packing {
        return Err(Error::InvalidInput("packing estimate needs packing counts".into()));
    }
    estimate(counts, window)
}

/// Diameters `2^{-k}` for `k = k_min..=k_max`, largest first.
pub fn dyadic_diameters(k_min: u32, k_max: u32) -> Vec<f64> {
    (k_min..=k_max).map(|k| 0.5f64.powi(k as i32)).collect()
}
