//! Closed-form harmonic functions on the unit disk and their lower envelopes.
//!
//! Every representation here is the real part of an explicit holomorphic
//! function, so harmonic conjugates are available in closed form and the
//! family is closed under conjugation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::root::bisect;
use crate::{require_in_disk, ComplexPoint, Error, Result};

/// Minimum value a positive harmonic function must take at the origin.
pub const POSITIVITY_MARGIN: f64 = 1e-6;
/// Boundary samples used when positivity cannot be decided exactly.
pub const POSITIVITY_SAMPLES: usize = 720;
/// Rounding slack allowed on the sampled boundary minimum.
const BOUNDARY_SLACK: f64 = 1e-12;

/// A harmonic function on the unit disk given by a closed form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum HarmonicFn {
    /// `λ ↦ alpha·Re λ + beta·Im λ + gamma`
    Affine { alpha: f64, beta: f64, gamma: f64 },
    /// `r e^{iθ} ↦ c0 + Σ_{m≥1} r^m (c_m cos mθ + d_m sin mθ)`
    #[serde(rename = "trigpoly")]
    TrigPoly {
        c0: f64,
        #[serde(rename = "cos", default)]
        cos_coeffs: Vec<f64>,
        #[serde(rename = "sin", default)]
        sin_coeffs: Vec<f64>,
    },
    Scaled { weight: f64, inner: Box<HarmonicFn> },
    Sum { terms: Vec<HarmonicFn> },
}

impl HarmonicFn {
    pub fn constant(c: f64) -> Self {
        HarmonicFn::Affine { alpha: 0.0, beta: 0.0, gamma: c }
    }

    pub fn affine(alpha: f64, beta: f64, gamma: f64) -> Self {
        HarmonicFn::Affine { alpha, beta, gamma }
    }

    pub fn trig_poly(c0: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Self {
        HarmonicFn::TrigPoly { c0, cos_coeffs, sin_coeffs }
    }

    /// `self + c`.
    pub fn shifted(self, c: f64) -> Self {
        HarmonicFn::Sum { terms: vec![self, HarmonicFn::constant(c)] }
    }

    /// Checks the structural invariants (finite coefficients, nonnegative weights).
    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::NonFinite(format!("{what} = {x}")))
            }
        };
        match self {
            HarmonicFn::Affine { alpha, beta, gamma } => {
                finite(*alpha, "alpha")?;
                finite(*beta, "beta")?;
                finite(*gamma, "gamma")
            }
            HarmonicFn::TrigPoly { c0, cos_coeffs, sin_coeffs } => {
                finite(*c0, "c0")?;
                cos_coeffs
                    .iter()
                    .chain(sin_coeffs)
                    .try_for_each(|c| finite(*c, "coefficient"))
            }
            HarmonicFn::Scaled { weight, inner } => {
                finite(*weight, "weight")?;
                if *weight < 0.0 {
                    return Err(Error::NegativeValue(*weight));
                }
                inner.validate()
            }
            HarmonicFn::Sum { terms } => terms.iter().try_for_each(HarmonicFn::validate),
        }
    }

    /// Value at `λ`, which must lie in the open unit disk.
    pub fn eval(&self, lambda: ComplexPoint) -> Result<f64> {
        require_in_disk(lambda)?;
        Ok(self.value_at(lambda))
    }

    /// Value of the closed form at any point of the closed disk (no domain check).
    pub fn value_at(&self, lambda: ComplexPoint) -> f64 {
        match self {
            HarmonicFn::Affine { alpha, beta, gamma } => alpha * lambda.re + beta * lambda.im + gamma,
            HarmonicFn::TrigPoly { .. } => self.holomorphic_at(lambda).re,
            HarmonicFn::Scaled { weight, inner } => weight * inner.value_at(lambda),
            HarmonicFn::Sum { terms } => terms.iter().map(|t| t.value_at(lambda)).sum(),
        }
    }

    /// The holomorphic function `h + i·h̃` with `h̃(0) = 0`.
    pub fn holomorphic_at(&self, lambda: ComplexPoint) -> Complex64 {
        match self {
            // alpha x + beta y + gamma = Re((alpha - i beta) λ) + gamma
            HarmonicFn::Affine { alpha, beta, gamma } => {
                Complex64::new(*alpha, -*beta) * lambda + *gamma
            }
            HarmonicFn::TrigPoly { c0, cos_coeffs, sin_coeffs } => {
                let degree = cos_coeffs.len().max(sin_coeffs.len());
                let mut acc = Complex64::new(*c0, 0.0);
                let mut power = Complex64::new(1.0, 0.0);
                for m in 0..degree {
                    power *= lambda;
                    let c = cos_coeffs.get(m).copied().unwrap_or(0.0);
                    let d = sin_coeffs.get(m).copied().unwrap_or(0.0);
                    acc += Complex64::new(c, -d) * power;
                }
                acc
            }
            HarmonicFn::Scaled { weight, inner } => inner.holomorphic_at(lambda) * *weight,
            HarmonicFn::Sum { terms } => terms.iter().map(|t| t.holomorphic_at(lambda)).sum(),
        }
    }

    /// The harmonic conjugate `h̃`, normalised by `h̃(0) = 0`, in the same
    /// closed-form family.
    pub fn conjugate(&self) -> HarmonicFn {
        match self {
            // h̃ = alpha·y − beta·x
            HarmonicFn::Affine { alpha, beta, .. } => {
                HarmonicFn::Affine { alpha: -*beta, beta: *alpha, gamma: 0.0 }
            }
            // h̃ = Σ r^m (c_m sin mθ − d_m cos mθ)
            HarmonicFn::TrigPoly { cos_coeffs, sin_coeffs, .. } => HarmonicFn::TrigPoly {
                c0: 0.0,
                cos_coeffs: sin_coeffs.iter().map(|d| -d).collect(),
                sin_coeffs: cos_coeffs.clone(),
            },
            HarmonicFn::Scaled { weight, inner } => {
                HarmonicFn::Scaled { weight: *weight, inner: Box::new(inner.conjugate()) }
            }
            HarmonicFn::Sum { terms } => {
                HarmonicFn::Sum { terms: terms.iter().map(HarmonicFn::conjugate).collect() }
            }
        }
    }

    /// Collapses the function to a single affine form when it has one.
    pub fn as_affine(&self) -> Option<(f64, f64, f64)> {
        match self {
            HarmonicFn::Affine { alpha, beta, gamma } => Some((*alpha, *beta, *gamma)),
            HarmonicFn::TrigPoly { c0, cos_coeffs, sin_coeffs } => {
                let deg1 = |v: &Vec<f64>| v.iter().skip(1).all(|c| *c == 0.0);
                if deg1(cos_coeffs) && deg1(sin_coeffs) {
                    let c = cos_coeffs.first().copied().unwrap_or(0.0);
                    let d = sin_coeffs.first().copied().unwrap_or(0.0);
                    Some((c, d, *c0))
                } else {
                    None
                }
            }
            HarmonicFn::Scaled { weight, inner } => {
                inner.as_affine().map(|(a, b, g)| (weight * a, weight * b, weight * g))
            }
            HarmonicFn::Sum { terms } => terms.iter().try_fold((0.0, 0.0, 0.0), |acc, t| {
                t.as_affine().map(|(a, b, g)| (acc.0 + a, acc.1 + b, acc.2 + g))
            }),
        }
    }

    /// Infimum over the unit circle, exact for affine forms and sampled on
    /// [`POSITIVITY_SAMPLES`] equispaced points otherwise.
    pub fn boundary_min(&self) -> f64 {
        if let Some((a, b, g)) = self.as_affine() {
            return g - a.hypot(b);
        }
        (0..POSITIVITY_SAMPLES)
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / POSITIVITY_SAMPLES as f64;
                self.value_at(Complex64::from_polar(1.0, theta))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Certifies `h > 0` on the open disk.
    ///
    /// The boundary infimum must be nonnegative (up to rounding) and the value
    /// at the origin, which is the boundary mean, must be at least
    /// [`POSITIVITY_MARGIN`]. By the minimum principle this forces `h > 0`
    /// inside. For non-affine forms the boundary infimum is sampled, so this
    /// is a certificate with margin rather than a proof.
    pub fn certify_positive(&self) -> Result<PositivityCertificate> {
        self.validate()?;
        let boundary_min = self.boundary_min();
        let center_value = self.value_at(Complex64::new(0.0, 0.0));
        if boundary_min < -BOUNDARY_SLACK || center_value < POSITIVITY_MARGIN {
            return Err(Error::NonPositiveHarmonic(format!(
                "boundary minimum {boundary_min:.6e}, value at origin {center_value:.6e}"
            )));
        }
        Ok(PositivityCertificate { boundary_min, center_value })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositivityCertificate {
    pub boundary_min: f64,
    pub center_value: f64,
}

/// Pointwise minimum of finitely many positive harmonic functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<HarmonicFn>", into = "Vec<HarmonicFn>")]
pub struct InfHarmonicFn {
    members: Vec<HarmonicFn>,
}

impl InfHarmonicFn {
    pub fn new(members: Vec<HarmonicFn>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput("inf-harmonic function needs at least one member".into()));
        }
        for m in &members {
            m.certify_positive()?;
        }
        Ok(InfHarmonicFn { members })
    }

    pub fn members(&self) -> &[HarmonicFn] {
        &self.members
    }

    pub fn eval(&self, lambda: ComplexPoint) -> Result<f64> {
        require_in_disk(lambda)?;
        Ok(self.value_at(lambda))
    }

    pub(crate) fn value_at(&self, lambda: ComplexPoint) -> f64 {
        self.members.iter().map(|h| h.value_at(lambda)).fold(f64::INFINITY, f64::min)
    }
}

impl TryFrom<Vec<HarmonicFn>> for InfHarmonicFn {
    type Error = Error;

    fn try_from(members: Vec<HarmonicFn>) -> Result<Self> {
        InfHarmonicFn::new(members)
    }
}

impl From<InfHarmonicFn> for Vec<HarmonicFn> {
    fn from(u: InfHarmonicFn) -> Self {
        u.members
    }
}

/// Harnack distance of the unit disk, `(1+ρ)/(1−ρ)` with `ρ` the
/// pseudo-hyperbolic distance `|λ1−λ2| / |1 − conj(λ2)·λ1|`.
pub fn harnack_distance(l1: ComplexPoint, l2: ComplexPoint) -> Result<f64> {
    require_in_disk(l1)?;
    require_in_disk(l2)?;
    let rho = (l1 - l2).norm() / (Complex64::new(1.0, 0.0) - l2.conj() * l1).norm();
    Ok((1.0 + rho) / (1.0 - rho))
}

/// Range of values a positive harmonic (or inf-harmonic) function can take at
/// `λ1` given its value `u0` at `λ2`.
pub fn harnack_interval(u0: f64, l1: ComplexPoint, l2: ComplexPoint) -> Result<(f64, f64)> {
    if u0 < 0.0 {
        return Err(Error::NegativeValue(u0));
    }
    let tau = harnack_distance(l1, l2)?;
    Ok((u0 / tau, u0 * tau))
}

/// Two-sided bound on `v(iy)` for a positive harmonic `v` symmetric under
/// conjugation, given `v(0) = v0`.
pub fn sym_harnack_interval(v0: f64, y: f64) -> Result<(f64, f64)> {
    if v0 < 0.0 {
        return Err(Error::NegativeValue(v0));
    }
    if !(y.abs() < 1.0) {
        return Err(Error::PointOutsideDisk(y.abs()));
    }
    let y2 = y * y;
    Ok((v0 * (1.0 - y2) / (1.0 + y2), v0 * (1.0 + y2) / (1.0 - y2)))
}

const ENVELOPE_T_LO: f64 = 1e-9;
const ENVELOPE_T_MAX: f64 = 1e12;
const ENVELOPE_RTOL: f64 = 1e-12;

/// Largest `t > 0` with `Σ_j (1/c)·exp(−u_j/t) ≤ 1`.
///
/// Returns `0.0` when no `t ≥ 1e-9` qualifies and `f64::INFINITY` when every
/// `t` up to `1e12` does.
pub fn infcone_envelope_solve(u_values: &[f64], c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidC(c));
    }
    for &u in u_values {
        if !u.is_finite() {
            return Err(Error::NonFinite(format!("u = {u}")));
        }
        if u < 0.0 {
            return Err(Error::NegativeValue(u));
        }
    }
    let within = |t: f64| u_values.iter().map(|u| (-u / t).exp()).sum::<f64>() / c <= 1.0;
    if !within(ENVELOPE_T_LO) {
        return Ok(0.0);
    }
    let mut lo = ENVELOPE_T_LO;
    let mut hi = 1.0;
    while within(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > ENVELOPE_T_MAX {
            return Ok(f64::INFINITY);
        }
    }
    Ok(bisect(within, lo, hi, ENVELOPE_RTOL).midpoint())
}
