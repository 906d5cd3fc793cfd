//! Text artifacts: point-cloud and scale-count CSV, estimate summaries and
//! SVG scatter plots. Reals are written with 17 significant digits so every
//! `f64` survives a round trip.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::dimest::{DimensionEstimate, ScaleCount, ScaleCounts, ScaleKind};
use crate::ifs::{CloudMeta, PointCloud};
use crate::{Error, Result};

/// Formats with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidInput(format!("line {line}: cannot parse {field:?} as a number")))
}

pub fn write_cloud_csv(cloud: &PointCloud) -> String {
    let mut s = String::with_capacity(48 * cloud.len() + 64);
    let seed = cloud.meta.seed.map_or_else(|| "none".to_string(), |v| v.to_string());
    let _ = writeln!(
        s,
        "# motionlab cloud v1; seed={seed}; method={}; source={}",
        cloud.meta.method, cloud.meta.source
    );
    for p in &cloud.points {
        let _ = writeln!(s, "{},{}", fmt_f64(p.re), fmt_f64(p.im));
    }
    s
}

pub fn read_cloud_csv(text: &str) -> Result<PointCloud> {
    let mut meta = CloudMeta { source: String::new(), seed: None, method: String::new() };
    let mut points = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            for field in header.split(';') {
                if let Some((key, value)) = field.trim().split_once('=') {
                    match key.trim() {
                        "seed" => meta.seed = value.trim().parse().ok(),
                        "method" => meta.method = value.trim().to_string(),
                        "source" => meta.source = value.trim().to_string(),
                        _ => {}
                    }
                }
            }
            continue;
        }
        let (x, y) = line
            .split_once(',')
            .ok_or_else(|| Error::InvalidInput(format!("line {}: expected x,y", idx + 1)))?;
        let p = crate::checked_point(parse_f64(x, idx + 1)?, parse_f64(y, idx + 1)?)?;
        points.push(p);
    }
    Ok(PointCloud::new(points, meta))
}

/// `k,count` or `delta,count` rows with a header line.
pub fn write_counts_csv(counts: &ScaleCounts) -> String {
    let mut s = String::new();
    match counts.kind {
        ScaleKind::Dyadic => {
            s.push_str("k,count\n");
            for e in &counts.entries {
                let _ = writeln!(s, "{},{}", e.scale as u32, e.count);
            }
        }
        ScaleKind::Packing => {
            s.push_str("delta,count\n");
            for e in &counts.entries {
                let _ = writeln!(s, "{},{}", fmt_f64(e.scale), e.count);
            }
        }
    }
    s
}

/// Reads counts written by [`write_counts_csv`]; `sample_size` is not part
/// of the file and must be supplied.
pub fn read_counts_csv(text: &str, sample_size: usize) -> Result<ScaleCounts> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let kind = match lines.next().map(|(_, l)| l.trim()) {
        Some("k,count") => ScaleKind::Dyadic,
        Some("delta,count") => ScaleKind::Packing,
        other => return Err(Error::InvalidInput(format!("unexpected counts header {other:?}"))),
    };
    let entries = lines
        .map(|(idx, line)| {
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| Error::InvalidInput(format!("line {}: expected two fields", idx + 1)))?;
            let count = b
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("line {}: bad count {b:?}", idx + 1)))?;
            Ok(ScaleCount { scale: parse_f64(a, idx + 1)?, count })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaleCounts::new(kind, entries, sample_size))
}

/// Flat `key: value` block describing an estimate.
pub fn estimate_block(label: &str, e: &DimensionEstimate) -> String {
    let slopes: Vec<String> = e.per_scale_local_slopes.iter().map(|s| format!("{s:.6}")).collect();
    format!(
        "estimator: {label}\nvalue: {}\nwindow: {}..{}\nscales: {}\nslope_stderr: {}\nr_squared: {}\nlower_diagnostic: {}\nlocal_slopes: {}\n",
        fmt_f64(e.value),
        e.window.0,
        e.window.1,
        e.scales_used,
        fmt_f64(e.slope_stderr),
        fmt_f64(e.r_squared),
        fmt_f64(e.lower_diagnostic()),
        slopes.join(" ")
    )
}

pub const ESTIMATE_CSV_HEADER: &str = "estimator,value,window_lo,window_hi,scales,slope_stderr,r_squared";

pub fn estimate_csv_row(label: &str, e: &DimensionEstimate) -> String {
    format!(
        "{label},{},{},{},{},{},{}",
        fmt_f64(e.value),
        e.window.0,
        e.window.1,
        e.scales_used,
        fmt_f64(e.slope_stderr),
        fmt_f64(e.r_squared)
    )
}

/// SVG 1.1 scatter plot of the cloud on a square canvas of `size` pixels.
/// Output depends only on the points and `size`.
pub fn cloud_svg(cloud: &PointCloud, size: u32) -> String {
    let size_f = size as f64;
    let margin = 0.05 * size_f;
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &cloud.points {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    if cloud.points.is_empty() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-300);
    let scale = (size_f - 2.0 * margin) / span;
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let to_px = |p: &Complex64| (0.5 * size_f + (p.re - cx) * scale, 0.5 * size_f - (p.im - cy) * scale);
    let mut s = String::with_capacity(40 * cloud.len() + 256);
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    let _ = writeln!(s, r#"<g fill="black" stroke="none">"#);
    let dot = (size_f / 800.0).max(0.25);
    for p in &cloud.points {
        let (px, py) = to_px(p);
        let _ = writeln!(s, r#"<circle cx="{px:.3}" cy="{py:.3}" r="{dot:.3}"/>"#);
    }
    s.push_str("</g>\n</svg>\n");
    s
}
