//! Closed-form distortion bounds for `k`-quasiconformal and
//! `k`-quasisymmetric maps.
//!
//! The normalisations these bounds assume (logarithmic capacity of the
//! non-conformal set at most 1, `F(z) = z + o(1)` at infinity) are stated
//! hypotheses, not something computed here.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Hypothesis attached to the area bounds.
pub const AREA_NORMALISATION: &str =
    "assumes F conformal off a compact set of logarithmic capacity at most 1 and F(z) = z + o(1) near infinity";

fn check_k(k: f64) -> Result<()> {
    if (0.0..1.0).contains(&k) {
        Ok(())
    } else {
        Err(Error::KOutOfRange(k))
    }
}

/// `K = (1+k)/(1−k)`.
pub fn k_to_big_k(k: f64) -> Result<f64> {
    check_k(k)?;
    Ok((1.0 + k) / (1.0 - k))
}

/// `k = (K−1)/(K+1)`.
pub fn big_k_to_k(big_k: f64) -> Result<f64> {
    if !(big_k >= 1.0) || !big_k.is_finite() {
        return Err(Error::InvalidInput(format!("K = {big_k} must be finite and at least 1")));
    }
    Ok((big_k - 1.0) / (big_k + 1.0))
}

/// Range of possible dimensions of `F(A)` when `dim A = d` and `F` is
/// `k`-quasiconformal: `1/d' − 1/2` lies within a factor `K` of `1/d − 1/2`.
pub fn dim_distortion_interval(dim_a: f64, k: f64) -> Result<(f64, f64)> {
    if !(dim_a > 0.0 && dim_a <= 2.0) {
        return Err(Error::DimOutOfRange(dim_a));
    }
    let big_k = k_to_big_k(k)?;
    let x = 1.0 / dim_a - 0.5;
    let clamp = |d: f64| d.clamp(f64::MIN_POSITIVE, 2.0);
    Ok((clamp(1.0 / (big_k * x + 0.5)), clamp(1.0 / (x / big_k + 0.5))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AreaCase {
    /// `μ_F = 0` a.e. on `A`.
    ConformalOnA,
    /// `μ_F = 0` a.e. off `A`.
    ConformalOffA,
    General,
}

/// Upper bound on `|F(A)|` given `|A|`.
pub fn area_distortion_bound(area: f64, k: f64, case: AreaCase) -> Result<f64> {
    if !(area >= 0.0) || !area.is_finite() {
        return Err(Error::AreaOutOfRange(area));
    }
    let big_k = k_to_big_k(k)?;
    let conformal_on_a = |a: f64| PI.powf(1.0 - 1.0 / big_k) * a.powf(1.0 / big_k);
    match case {
        AreaCase::ConformalOffA => Ok(big_k * area),
        AreaCase::ConformalOnA | AreaCase::General if area > PI => Err(Error::AreaOutOfRange(area)),
        AreaCase::ConformalOnA => Ok(conformal_on_a(area)),
        AreaCase::General => Ok(big_k * conformal_on_a(area)),
    }
}

/// Upper bound `1 + k²` on the Hausdorff dimension of a `k`-quasicircle.
pub fn smirnov_quasicircle_bound(k: f64) -> Result<f64> {
    check_k(k)?;
    Ok(1.0 + k * k)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuasisymmetricSpectrum {
    /// Lower bound `Δ(δ, k)`.
    pub lower: f64,
    /// Upper bound `Δ*(δ, k) = Δ(δ, −min(k, √(1−δ)))`.
    pub upper: f64,
    /// Set when `k > √(1−δ)`, where the upper bound saturates at 1.
    pub clamped: bool,
}

/// `1 − ((k+l)/(1+kl))²` with `l = √(1−δ)`, evaluated as
/// `(1−k²)·δ/(1+kl)²` so that `k = 0` returns `δ` exactly.
fn spectrum_formula(delta: f64, k: f64) -> f64 {
    let l = (1.0 - delta).sqrt();
    (1.0 - k * k) * delta / (1.0 + k * l).powi(2)
}

/// Bounds on the upper Minkowski or packing dimension of `g(A)` for a
/// `k`-quasisymmetric `g` of the line and `dim A = δ`.
pub fn quasisymmetric_spectrum(delta: f64, k: f64) -> Result<QuasisymmetricSpectrum> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    check_k(k)?;
    let l = (1.0 - delta).sqrt();
    let lower = spectrum_formula(delta, k);
    let clamped = k > l;
    // with k ≥ l the signed argument is −l and the quotient vanishes
    let upper = if k >= l { 1.0 } else { spectrum_formula(delta, -k) };
    Ok(QuasisymmetricSpectrum { lower, upper, clamped })
}
