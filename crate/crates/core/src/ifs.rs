//! Contractive similarity systems `γ_j(z) = a_j z + b_j` in the plane.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::root::{bisect, Bracket};
use crate::{ComplexPoint, Error, Result};

/// Points discarded at the start of every chaos-game orbit.
pub const CHAOS_BURN_IN: usize = 100;
/// Upper limit on `n^depth` for deterministic rendering.
pub const RENDER_GUARD: f64 = 1e8;
/// Relative bracket width of the similarity-dimension root.
pub const SIMDIM_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Similarity {
    pub a: Complex64,
    pub b: Complex64,
}

impl Similarity {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let ratio = a.norm();
        if !(ratio > 0.0 && ratio < 1.0) || !b.re.is_finite() || !b.im.is_finite() {
            return Err(Error::RatioOutOfRange(ratio));
        }
        Ok(Similarity { a, b })
    }

    #[inline]
    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }

    pub fn ratio(&self) -> f64 {
        self.a.norm()
    }

    pub fn fixed_point(&self) -> Complex64 {
        self.b / (Complex64::new(1.0, 0.0) - self.a)
    }

    /// Image of a disk.
    pub fn map_disk(&self, d: &Disk) -> Disk {
        Disk { center: self.apply(d.center), radius: self.ratio() * d.radius }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn unit() -> Self {
        Disk { center: Complex64::new(0.0, 0.0), radius: 1.0 }
    }

    pub fn contains_disk(&self, other: &Disk) -> bool {
        (other.center - self.center).norm() + other.radius <= self.radius
    }

    /// Strict disjointness of the closed disks.
    pub fn disjoint_from(&self, other: &Disk) -> bool {
        (other.center - self.center).norm() > self.radius + other.radius
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityIFS {
    maps: Vec<Similarity>,
    open_set: Disk,
    osc_verified: bool,
}

impl SimilarityIFS {
    pub fn new(maps: Vec<Similarity>, open_set: Disk) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::EmptySystem);
        }
        if !(open_set.radius > 0.0) {
            return Err(Error::InvalidInput(format!("open-set radius {} must be positive", open_set.radius)));
        }
        Ok(SimilarityIFS { maps, open_set, osc_verified: false })
    }

    /// Builds the system and runs [`check_open_set_disks`], recording the result.
    pub fn verified(maps: Vec<Similarity>, open_set: Disk) -> Result<Self> {
        let mut ifs = SimilarityIFS::new(maps, open_set)?;
        ifs.osc_verified = check_open_set_disks(&ifs).passed;
        Ok(ifs)
    }

    /// Marks the open set condition as holding by construction.
    pub(crate) fn assume_osc(mut self) -> Self {
        self.osc_verified = true;
        self
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn open_set(&self) -> &Disk {
        &self.open_set
    }

    pub fn osc_verified(&self) -> bool {
        self.osc_verified
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(Similarity::ratio).collect()
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// The classical middle-thirds Cantor system on `D(1/2, 1/2)`.
    pub fn cantor() -> Self {
        let third = Complex64::new(1.0 / 3.0, 0.0);
        let maps = vec![
            Similarity { a: third, b: Complex64::new(0.0, 0.0) },
            Similarity { a: third, b: Complex64::new(2.0 / 3.0, 0.0) },
        ];
        SimilarityIFS::verified(maps, Disk::new(Complex64::new(0.5, 0.0), 0.5))
            .expect("Cantor system is valid")
    }
}

/// Solves `Σ ratio_j^s = c` for `s > 0`, returning a bracket of relative
/// width at most [`SIMDIM_RTOL`] across which `Σ ratio_j^s − c` changes sign.
///
/// When `c ≥ ratios.len()` the infimum of admissible exponents is zero and the
/// degenerate bracket `[0, 0]` is returned.
pub fn similarity_dimension_bracket(ratios: &[f64], c: f64) -> Result<Bracket> {
    if ratios.is_empty() {
        return Err(Error::EmptySystem);
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidC(c));
    }
    if let Some(&bad) = ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::RatioOutOfRange(bad));
    }
    if c >= ratios.len() as f64 {
        return Ok(Bracket { lo: 0.0, hi: 0.0 });
    }
    // Σ r^s is strictly decreasing in s, equal to the map count at s = 0
    let above = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() > c;
    let mut lo = 0.0;
    let mut hi = 1.0;
    while above(hi) {
        lo = hi;
        hi *= 2.0;
    }
    Ok(bisect(above, lo, hi, SIMDIM_RTOL))
}

/// The unique `s` with `Σ ratio_j^s = c` (zero when `c ≥ count`).
pub fn similarity_dimension(ratios: &[f64], c: f64) -> Result<f64> {
    similarity_dimension_bracket(ratios, c).map(|b| b.midpoint())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairDiagnostic {
    pub i: usize,
    pub j: usize,
    /// Center distance minus the sum of radii; positive means disjoint.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OscReport {
    pub passed: bool,
    /// `R − (|center_j − w0| + r_j)` per map; nonnegative means contained.
    pub containment_slack: Vec<f64>,
    pub pairs: Vec<PairDiagnostic>,
}

/// Exact disk check of the open set condition for the system's open disk.
pub fn check_open_set_disks(ifs: &SimilarityIFS) -> OscReport {
    let u = ifs.open_set;
    let images: Vec<Disk> = ifs.maps.iter().map(|g| g.map_disk(&u)).collect();
    let containment_slack: Vec<f64> = images
        .iter()
        .map(|d| u.radius - ((d.center - u.center).norm() + d.radius))
        .collect();
    let mut pairs = Vec::new();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let gap = (images[i].center - images[j].center).norm() - images[i].radius - images[j].radius;
            pairs.push(PairDiagnostic { i, j, gap });
        }
    }
    let contained = images.iter().all(|d| u.contains_disk(d));
    let disjoint = pairs.iter().all(|p| images[p.i].disjoint_from(&images[p.j]));
    OscReport { passed: contained && disjoint, containment_slack, pairs }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderMethod {
    /// All `n^depth` images of the seed point under words of length `depth`.
    Deterministic { depth: u32 },
    /// A seeded random orbit of `count` points after burn-in.
    ChaosGame { count: usize, seed: u64 },
}

impl RenderMethod {
    pub fn label(&self) -> String {
        match self {
            RenderMethod::Deterministic { depth } => format!("det:{depth}"),
            RenderMethod::ChaosGame { count, .. } => format!("chaos:{count}"),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            RenderMethod::Deterministic { .. } => None,
            RenderMethod::ChaosGame { seed, .. } => Some(*seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CloudMeta {
    pub source: String,
    pub seed: Option<u64>,
    pub method: String,
}

/// A finite sample of a limit set.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub points: Vec<ComplexPoint>,
    pub meta: CloudMeta,
}

impl PointCloud {
    pub fn new(points: Vec<ComplexPoint>, meta: CloudMeta) -> Self {
        PointCloud { points, meta }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of distinct points (exact coordinate equality).
    pub fn distinct_count(&self) -> usize {
        let mut keys: Vec<(u64, u64)> =
            self.points.iter().map(|p| (p.re.to_bits(), p.im.to_bits())).collect();
        keys.sort_unstable();
        keys.dedup();
        keys.len()
    }

    pub fn diameter_bound(&self) -> f64 {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in &self.points {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        if self.points.is_empty() {
            0.0
        } else {
            (x1 - x0).hypot(y1 - y0)
        }
    }

    pub fn translated(&self, offset: Complex64) -> PointCloud {
        PointCloud {
            points: self.points.iter().map(|p| p + offset).collect(),
            meta: self.meta.clone(),
        }
    }

    pub fn merge(clouds: Vec<PointCloud>, meta: CloudMeta) -> PointCloud {
        PointCloud { points: clouds.into_iter().flat_map(|c| c.points).collect(), meta }
    }
}

/// Samples the limit set of `ifs`.
///
/// Deterministic rendering starts from the fixed point of the first map, so
/// every point lies exactly in the limit set; level `k+1` is the
/// concatenation over `j` of `γ_j` applied to level `k`.
pub fn render_limit_set(ifs: &SimilarityIFS, method: RenderMethod) -> Result<PointCloud> {
    if ifs.is_empty() {
        return Err(Error::EmptySystem);
    }
    if !ifs.osc_verified {
        log::warn!("rendering a system without a verified open set condition");
    }
    let seed_point = ifs.maps[0].fixed_point();
    let points = match method {
        RenderMethod::Deterministic { depth } => {
            let total = (ifs.len() as f64).powi(depth as i32);
            if total > RENDER_GUARD {
                return Err(Error::ExplosionGuard(total));
            }
            let mut level = vec![seed_point];
            for _ in 0..depth {
                level = ifs
                    .maps
                    .par_iter()
                    .flat_map_iter(|g| level.iter().map(move |z| g.apply(*z)))
                    .collect();
            }
            level
        }
        RenderMethod::ChaosGame { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = ifs.len();
            let mut z = seed_point;
            let mut out = Vec::with_capacity(count);
            for step in 0..count + CHAOS_BURN_IN {
                z = ifs.maps[rng.gen_range(0..n)].apply(z);
                if step >= CHAOS_BURN_IN {
                    out.push(z);
                }
            }
            out
        }
    };
    Ok(PointCloud::new(
        points,
        CloudMeta { source: "ifs".into(), seed: method.seed(), method: method.label() },
    ))
}

/// Diameter of `γ_{j1} ∘ … ∘ γ_{jk}(U)` for the system's open disk `U`.
pub fn cell_diameter(ifs: &SimilarityIFS, address: &[usize]) -> Result<f64> {
    let mut diam = 2.0 * ifs.open_set.radius;
    for &j in address {
        let g = ifs.maps.get(j).ok_or(Error::BadAddress { index: j, maps: ifs.len() })?;
        diam *= g.ratio();
    }
    Ok(diam)
}
