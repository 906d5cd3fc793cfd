//! Explicit holomorphic motions of self-similar sets.
//!
//! An [`AstalaMotion`] moves the limit set of `n` similarities
//! `γ_{j,λ}(z) = r·a(λ)·z + w_j`, with `r = 1/√(2n)`, disjoint disks
//! `D̄(w_j, r)` inside the unit disk and `a(λ) = n^{−(h + i h̃)(λ)}` for a
//! positive harmonic `h`. Its dimension satisfies
//! `1/s(λ) = h(λ) + 1/2 + log 2 / (2 log n)`.
//!
//! A [`CompositeMotion`] places finitely many such motions in disjoint
//! container disks; the dimension of the union is the largest component
//! dimension, so its reciprocal is the minimum of harmonic functions.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::harmonic::{HarmonicFn, InfHarmonicFn};
use crate::ifs::{render_limit_set, similarity_dimension, CloudMeta, Disk, PointCloud, RenderMethod, Similarity, SimilarityIFS};
use crate::{require_in_disk, ComplexPoint, Error, Result};

/// Relative clearance added to the disk radius during placement.
pub const PLACEMENT_EPS: f64 = 0.005;
/// Smallest map count for which placement is attempted.
pub const MIN_MAPS: usize = 10;

const PLACEMENT_SLACK: f64 = 1e-12;

/// Radius `1/√(2n)` of the disks holding the first-level pieces.
pub fn piece_radius(n: usize) -> f64 {
    1.0 / (2.0 * n as f64).sqrt()
}

/// `log 2 / (2 log n)`: the part of the reciprocal dimension that does not
/// depend on `h`.
pub fn reciprocal_offset(n: usize) -> f64 {
    LN_2 / (2.0 * (n as f64).ln())
}

/// Places `n` centers `w_j` so that the closed disks `D̄(w_j, r(1+ε))`,
/// `r = 1/√(2n)`, are disjoint and inside the unit disk.
///
/// Concentric rings are filled from the outside in, each ring holding
/// `⌊π / asin(r'/ρ)⌋` equally spaced disks at most, followed by one disk at
/// the center. If the rings cannot hold `n` disks a clipped hexagonal lattice
/// is used instead. The result is validated before it is returned.
pub fn place_disks(n: usize) -> Result<Vec<ComplexPoint>> {
    if n < MIN_MAPS {
        return Err(Error::InvalidInput(format!("need n >= {MIN_MAPS}, got {n}")));
    }
    let r = piece_radius(n) * (1.0 + PLACEMENT_EPS);
    let centers = ring_placement(n, r).or_else(|| hex_placement(n, r)).ok_or(Error::DiskPackingFailed(n))?;
    validate_placement(&centers, r).map_err(|_| Error::DiskPackingFailed(n))?;
    Ok(centers)
}

fn ring_placement(n: usize, r: f64) -> Option<Vec<ComplexPoint>> {
    let mut centers = Vec::with_capacity(n);
    let mut rho = 1.0 - r;
    while centers.len() < n {
        let remaining = n - centers.len();
        if rho >= r {
            let capacity = (PI / (r / rho).asin()).floor() as usize;
            let m = remaining.min(capacity);
            centers.extend((0..m).map(|j| Complex64::from_polar(rho, 2.0 * PI * j as f64 / m as f64)));
            rho -= 2.0 * r;
        } else if rho >= 0.0 {
            centers.push(Complex64::new(0.0, 0.0));
            break;
        } else {
            break;
        }
    }
    (centers.len() == n).then_some(centers)
}

fn hex_placement(n: usize, r: f64) -> Option<Vec<ComplexPoint>> {
    let pitch = 2.0 * r;
    let row_step = pitch * 3f64.sqrt() / 2.0;
    let limit = 1.0 - r;
    let rows = (limit / row_step).floor() as i64;
    let cols = (limit / pitch).ceil() as i64 + 1;
    let mut pts = Vec::new();
    for row in -rows..=rows {
        let shift = if row.rem_euclid(2) == 1 { 0.5 * pitch } else { 0.0 };
        for col in -cols..=cols {
            let p = Complex64::new(col as f64 * pitch + shift, row as f64 * row_step);
            if p.norm() <= limit {
                pts.push(p);
            }
        }
    }
    if pts.len() < n {
        return None;
    }
    pts.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
    pts.truncate(n);
    Some(pts)
}

/// Checks that closed disks of radius `r` about `centers` are pairwise
/// disjoint (up to rounding) and inside the closed unit disk.
pub fn validate_placement(centers: &[ComplexPoint], r: f64) -> Result<()> {
    use std::collections::HashMap;
    for (i, w) in centers.iter().enumerate() {
        if w.norm() > 1.0 - r + PLACEMENT_SLACK {
            return Err(Error::InvalidInput(format!("disk {i} leaves the unit disk")));
        }
    }
    let cell = 2.0 * r;
    let key = |w: &ComplexPoint| ((w.re / cell).floor() as i64, (w.im / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, w) in centers.iter().enumerate() {
        grid.entry(key(w)).or_default().push(i);
    }
    for (i, w) in centers.iter().enumerate() {
        let (kx, ky) = key(w);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &j in grid.get(&(kx + dx, ky + dy)).into_iter().flatten() {
                    if j > i && (centers[j] - w).norm() < 2.0 * r - PLACEMENT_SLACK {
                        return Err(Error::InvalidInput(format!("disks {i} and {j} overlap")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// A point of the limit set named by an eventually constant address:
/// the maps in `prefix` (outermost first) applied to the fixed point of
/// map `tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Address {
    pub prefix: Vec<usize>,
    pub tail: usize,
}

impl Address {
    pub fn new(prefix: Vec<usize>, tail: usize) -> Self {
        Address { prefix, tail }
    }

    /// The fixed point of map `j`.
    pub fn fixed(j: usize) -> Self {
        Address { prefix: Vec::new(), tail: j }
    }

    fn check(&self, maps: usize) -> Result<()> {
        match self.prefix.iter().chain(std::iter::once(&self.tail)).find(|&&j| j >= maps) {
            Some(&index) => Err(Error::BadAddress { index, maps }),
            None => Ok(()),
        }
    }
}

/// Anything whose limit set at parameter `λ` has a known dimension and can
/// be sampled.
pub trait MotionFamily: Sync {
    fn dimension(&self, lambda: ComplexPoint) -> Result<f64>;

    fn render(&self, lambda: ComplexPoint, method: RenderMethod) -> Result<PointCloud>;

    fn describe(&self) -> String;
}

#[derive(Clone, Debug, PartialEq)]
pub struct AstalaMotion {
    n: usize,
    h: HarmonicFn,
    h_conj: HarmonicFn,
    centers: Vec<ComplexPoint>,
    r: f64,
}

/// Builds the `n`-map motion for a positive harmonic `h`, placing the disks
/// with [`place_disks`].
pub fn build_astala_motion(h: HarmonicFn, n: usize) -> Result<AstalaMotion> {
    h.certify_positive()?;
    if n < MIN_MAPS {
        return Err(Error::InvalidInput(format!("need n >= {MIN_MAPS}, got {n}")));
    }
    let centers = place_disks(n)?;
    Ok(AstalaMotion::from_parts(h, n, centers))
}

/// Like [`build_astala_motion`] but with caller-supplied centers, which are
/// validated against radius `1/√(2n)`.
pub fn build_astala_motion_with_centers(h: HarmonicFn, centers: Vec<ComplexPoint>) -> Result<AstalaMotion> {
    h.certify_positive()?;
    let n = centers.len();
    if n < 2 {
        return Err(Error::InvalidInput("need at least two centers".into()));
    }
    validate_placement(&centers, piece_radius(n)).map_err(|_| Error::DiskPackingFailed(n))?;
    Ok(AstalaMotion::from_parts(h, n, centers))
}

impl AstalaMotion {
    fn from_parts(h: HarmonicFn, n: usize, centers: Vec<ComplexPoint>) -> Self {
        let h_conj = h.conjugate();
        AstalaMotion { n, h, h_conj, centers, r: piece_radius(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn harmonic(&self) -> &HarmonicFn {
        &self.h
    }

    pub fn conjugate(&self) -> &HarmonicFn {
        &self.h_conj
    }

    pub fn centers(&self) -> &[ComplexPoint] {
        &self.centers
    }

    pub fn piece_radius(&self) -> f64 {
        self.r
    }

    /// `a(λ) = exp(−(h + i h̃)(λ) · log n)`; `|a(λ)| = n^{−h(λ)}`.
    pub fn contraction(&self, lambda: ComplexPoint) -> Result<Complex64> {
        require_in_disk(lambda)?;
        Ok(self.contraction_at(lambda))
    }

    fn contraction_at(&self, lambda: ComplexPoint) -> Complex64 {
        (-self.h.holomorphic_at(lambda) * (self.n as f64).ln()).exp()
    }

    /// The system `γ_{j,λ}(z) = r a(λ) z + w_j` on the unit disk.
    pub fn ifs_at(&self, lambda: ComplexPoint) -> Result<SimilarityIFS> {
        let ra = self.contraction(lambda)? * self.r;
        let maps = self
            .centers
            .iter()
            .map(|w| Similarity::new(ra, *w))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimilarityIFS::new(maps, Disk::unit())?.assume_osc())
    }

    /// `1 / s(λ) = h(λ) + 1/2 + log 2/(2 log n)`.
    pub fn reciprocal_dimension(&self, lambda: ComplexPoint) -> Result<f64> {
        Ok(self.h.eval(lambda)? + 0.5 + reciprocal_offset(self.n))
    }

    pub fn dimension(&self, lambda: ComplexPoint) -> Result<f64> {
        self.reciprocal_dimension(lambda).map(|x| 1.0 / x)
    }

    /// `f_λ(z)` for the limit point `z` named by `address`.
    pub fn point_image(&self, address: &Address, lambda: ComplexPoint) -> Result<ComplexPoint> {
        require_in_disk(lambda)?;
        address.check(self.n)?;
        let ra = self.contraction_at(lambda) * self.r;
        let mut z = self.centers[address.tail] / (Complex64::new(1.0, 0.0) - ra);
        for &j in address.prefix.iter().rev() {
            z = ra * z + self.centers[j];
        }
        Ok(z)
    }
}

impl MotionFamily for AstalaMotion {
    fn dimension(&self, lambda: ComplexPoint) -> Result<f64> {
        AstalaMotion::dimension(self, lambda)
    }

    fn render(&self, lambda: ComplexPoint, method: RenderMethod) -> Result<PointCloud> {
        let mut cloud = render_limit_set(&self.ifs_at(lambda)?, method)?;
        cloud.meta.source = format!("astala n={} lambda={}", self.n, fmt_lambda(lambda));
        Ok(cloud)
    }

    fn describe(&self) -> String {
        format!("astala motion, n = {}", self.n)
    }
}

/// Free-function form of [`AstalaMotion::ifs_at`].
pub fn motion_ifs_at(m: &AstalaMotion, lambda: ComplexPoint) -> Result<SimilarityIFS> {
    m.ifs_at(lambda)
}

/// Free-function form of [`AstalaMotion::dimension`].
pub fn motion_dimension(m: &AstalaMotion, lambda: ComplexPoint) -> Result<f64> {
    m.dimension(lambda)
}

/// Free-function form of [`AstalaMotion::point_image`].
pub fn motion_point_image(m: &AstalaMotion, address: &Address, lambda: ComplexPoint) -> Result<ComplexPoint> {
    m.point_image(address, lambda)
}

/// Dimension of the motion's system at `λ` from the root solver rather than
/// the closed form.
pub fn solved_dimension(m: &AstalaMotion, lambda: ComplexPoint) -> Result<f64> {
    similarity_dimension(&m.ifs_at(lambda)?.ratios(), 1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositeComponent {
    pub motion: AstalaMotion,
    pub container: Disk,
}

impl CompositeComponent {
    /// The component's system conjugated into its container:
    /// `z ↦ ζ + s·γ((z − ζ)/s)`.
    pub fn ifs_at(&self, lambda: ComplexPoint) -> Result<SimilarityIFS> {
        let base = self.motion.ifs_at(lambda)?;
        let (zeta, s) = (self.container.center, self.container.radius);
        let maps = base
            .maps()
            .iter()
            .map(|g| Similarity::new(g.a, zeta + g.b * s - g.a * zeta))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimilarityIFS::new(maps, self.container)?.assume_osc())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositeMotion {
    components: Vec<CompositeComponent>,
    target: InfHarmonicFn,
}

/// Container disk of component `j`: `D(2^{−j}·3/4, 2^{−j}/8)`.
pub fn container_disk(j: usize) -> Disk {
    let scale = 0.5f64.powi(j as i32);
    Disk::new(Complex64::new(0.75 * scale, 0.0), scale / 8.0)
}

/// Assembles a finite union of motions whose reciprocal dimension tracks the
/// target reciprocal dimension `u` from above.
///
/// Member `j` of `target` minus `1/2` drives the `j`-th component with
/// `component_ns[j]` maps. The achieved reciprocal dimension is
/// `min_j (member_j + log 2/(2 log n_j))`, which exceeds `u` by at most
/// [`CompositeMotion::excess_bound`].
pub fn build_prescribed_motion(target: InfHarmonicFn, component_ns: &[usize]) -> Result<CompositeMotion> {
    build_prescribed_motion_with_centers(target, component_ns, None)
}

pub fn build_prescribed_motion_with_centers(
    target: InfHarmonicFn,
    component_ns: &[usize],
    centers: Option<Vec<Vec<ComplexPoint>>>,
) -> Result<CompositeMotion> {
    let members = target.members();
    if members.len() != component_ns.len() {
        return Err(Error::BadArity(format!(
            "{} target members but {} component sizes",
            members.len(),
            component_ns.len()
        )));
    }
    if let Some(c) = &centers {
        if c.len() != members.len() {
            return Err(Error::BadArity(format!("{} center lists for {} components", c.len(), members.len())));
        }
    }
    let mut components = Vec::with_capacity(members.len());
    for (j, (member, &n)) in members.iter().zip(component_ns).enumerate() {
        let h = member.clone().shifted(-0.5);
        let motion = match &centers {
            Some(c) => {
                if c[j].len() != n {
                    return Err(Error::BadArity(format!("component {j}: {} centers for n = {n}", c[j].len())));
                }
                build_astala_motion_with_centers(h, c[j].clone())?
            }
            None => build_astala_motion(h, n)?,
        };
        components.push(CompositeComponent { motion, container: container_disk(j) });
    }
    Ok(CompositeMotion { components, target })
}

impl CompositeMotion {
    pub fn components(&self) -> &[CompositeComponent] {
        &self.components
    }

    pub fn target(&self) -> &InfHarmonicFn {
        &self.target
    }

    /// `1/d̂(λ)`, the minimum of the component reciprocal dimensions.
    pub fn achieved_reciprocal(&self, lambda: ComplexPoint) -> Result<f64> {
        self.components
            .iter()
            .map(|c| c.motion.reciprocal_dimension(lambda))
            .try_fold(f64::INFINITY, |acc, x| x.map(|x| acc.min(x)))
    }

    /// Upper bound `log 2/(2 log min_j n_j)` on `1/d̂ − u`.
    pub fn excess_bound(&self) -> f64 {
        let n_min = self.components.iter().map(|c| c.motion.n()).min().unwrap_or(MIN_MAPS);
        reciprocal_offset(n_min)
    }

    /// `1/d̂(λ) − u(λ)`, always within `[0, excess_bound]`.
    pub fn excess(&self, lambda: ComplexPoint) -> Result<f64> {
        Ok(self.achieved_reciprocal(lambda)? - self.target.eval(lambda)?)
    }

    pub fn dimension(&self, lambda: ComplexPoint) -> Result<f64> {
        self.achieved_reciprocal(lambda).map(|x| 1.0 / x)
    }
}

impl MotionFamily for CompositeMotion {
    fn dimension(&self, lambda: ComplexPoint) -> Result<f64> {
        CompositeMotion::dimension(self, lambda)
    }

    /// Renders every component with the same method (chaos-game points are
    /// split evenly, seeds offset by the component index) and concatenates.
    fn render(&self, lambda: ComplexPoint, method: RenderMethod) -> Result<PointCloud> {
        let k = self.components.len();
        let clouds = self
            .components
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let m = match method {
                    RenderMethod::ChaosGame { count, seed } => RenderMethod::ChaosGame {
                        count: count / k + usize::from(j < count % k),
                        seed: seed.wrapping_add(j as u64),
                    },
                    det => det,
                };
                render_limit_set(&c.ifs_at(lambda)?, m)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointCloud::merge(
            clouds,
            CloudMeta {
                source: format!("composite k={k} lambda={}", fmt_lambda(lambda)),
                seed: method.seed(),
                method: method.label(),
            },
        ))
    }

    fn describe(&self) -> String {
        let ns: Vec<String> = self.components.iter().map(|c| c.motion.n().to_string()).collect();
        format!("composite motion, n = [{}]", ns.join(","))
    }
}

/// Free-function form of [`CompositeMotion::dimension`].
pub fn composite_dimension(cm: &CompositeMotion, lambda: ComplexPoint) -> Result<f64> {
    cm.dimension(lambda)
}

/// A fixed system viewed as a motion that does not move.
#[derive(Clone, Debug)]
pub struct StaticMotion {
    ifs: SimilarityIFS,
    dim: f64,
}

impl StaticMotion {
    pub fn new(ifs: SimilarityIFS) -> Result<Self> {
        let dim = similarity_dimension(&ifs.ratios(), 1.0)?;
        Ok(StaticMotion { ifs, dim })
    }
}

impl MotionFamily for StaticMotion {
    fn dimension(&self, lambda: ComplexPoint) -> Result<f64> {
        require_in_disk(lambda)?;
        Ok(self.dim)
    }

    fn render(&self, lambda: ComplexPoint, method: RenderMethod) -> Result<PointCloud> {
        require_in_disk(lambda)?;
        render_limit_set(&self.ifs, method)
    }

    fn describe(&self) -> String {
        format!("static system, {} maps", self.ifs.len())
    }
}

pub(crate) fn fmt_lambda(l: ComplexPoint) -> String {
    let re = l.re + 0.0;
    if l.im < 0.0 {
        format!("{re}{}i", l.im)
    } else {
        format!("{re}+{}i", l.im.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::check_open_set_disks;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn constant_motion() -> AstalaMotion {
        build_astala_motion(HarmonicFn::constant(1.0), 10).unwrap()
    }

    fn linear_motion() -> AstalaMotion {
        build_astala_motion(HarmonicFn::affine(1.0, 0.0, 1.0), 10).unwrap()
    }

    #[test]
    fn ten_disks_form_one_ring() {
        let w = place_disks(10).unwrap();
        assert_eq!(w.len(), 10);
        let rho = w[0].norm();
        let r = piece_radius(10);
        for (j, p) in w.iter().enumerate() {
            assert!((p.norm() - rho).abs() < 1e-12);
            let angle = 2.0 * PI * j as f64 / 10.0;
            assert!((p - Complex64::from_polar(rho, angle)).norm() < 1e-12);
            assert!(p.norm() + r < 1.0);
        }
        let adjacent = (w[1] - w[0]).norm();
        assert!(adjacent >= 2.0 * r * (1.0 + PLACEMENT_EPS) - 1e-12);
        // the ring at radius 0.75 is feasible too; ours sits further out
        assert!(1.5 * (PI / 10.0).sin() > 2.0 * r);
        assert!(rho > 0.75);
    }

    #[test]
    fn placement_is_deterministic_and_valid() {
        for n in [10, 11, 13, 19, 50, 200, 1000] {
            let w = place_disks(n).unwrap();
            assert_eq!(w, place_disks(n).unwrap());
            validate_placement(&w, piece_radius(n) * (1.0 + PLACEMENT_EPS)).unwrap();
        }
        assert!(place_disks(9).is_err());
    }

    #[test]
    fn hex_fallback_is_valid() {
        let n = 500;
        let r = piece_radius(n) * (1.0 + PLACEMENT_EPS);
        let w = hex_placement(n, r).unwrap();
        assert_eq!(w.len(), n);
        validate_placement(&w, r).unwrap();
    }

    #[test]
    fn validation_catches_overlap() {
        let w = vec![c(0.0, 0.0), c(0.1, 0.0)];
        assert!(validate_placement(&w, 0.1).is_err());
        assert!(validate_placement(&[c(0.95, 0.0)], 0.1).is_err());
    }

    #[test]
    fn constant_harmonic_gives_constant_contraction() {
        let m = constant_motion();
        let a0 = m.contraction(c(0.0, 0.0)).unwrap();
        assert!((a0 - c(0.1, 0.0)).norm() < 1e-15);
        let a1 = m.contraction(c(0.3, -0.6)).unwrap();
        assert!((a1 - a0).norm() < 1e-15);
        let ifs = m.ifs_at(c(0.0, 0.0)).unwrap();
        assert_eq!(ifs.len(), 10);
        for (g, w) in ifs.maps().iter().zip(m.centers()) {
            assert!((g.ratio() - 0.1 / 20f64.sqrt()).abs() < 1e-15);
            assert_eq!(g.b, *w);
        }
        assert!(check_open_set_disks(&ifs).passed);
    }

    #[test]
    fn linear_harmonic_contraction() {
        let m = linear_motion();
        let a = m.contraction(c(0.5, 0.0)).unwrap();
        assert!((a.norm() - 10f64.powf(-1.5)).abs() < 1e-15);
        // a(λ) = 10^{-(1+λ)}
        let z = c(0.2, 0.3);
        let expect = (-(c(1.0, 0.0) + z) * 10f64.ln()).exp();
        assert!((m.contraction(z).unwrap() - expect).norm() < 1e-15);
        let a0 = m.contraction(c(0.0, 0.0)).unwrap();
        assert_eq!(a0.im, 0.0);
        assert!(a0.re > 0.0);
    }

    #[test]
    fn dimension_examples() {
        let m = constant_motion();
        let s0 = m.dimension(c(0.0, 0.0)).unwrap();
        assert!((s0 - 1.0 / (1.5 + LN_2 / (2.0 * 10f64.ln()))).abs() < 1e-15);
        assert!((s0 - 0.605870).abs() < 2e-6);
        let m = linear_motion();
        assert!((m.dimension(c(0.5, 0.0)).unwrap() - 0.465005).abs() < 1e-6);
        assert!((m.dimension(c(-0.5, 0.0)).unwrap() - 0.869175).abs() < 1e-6);
        assert!(m.dimension(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn closed_form_matches_root_solver() {
        for m in [constant_motion(), linear_motion()] {
            for z in [c(0.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.3, 0.7)] {
                let closed = m.dimension(z).unwrap();
                let solved = solved_dimension(&m, z).unwrap();
                assert!((closed - solved).abs() <= 1e-12, "{closed} vs {solved}");
            }
        }
    }

    #[test]
    fn non_positive_harmonic_rejected() {
        assert!(matches!(
            build_astala_motion(HarmonicFn::affine(2.0, 0.0, 1.0), 10),
            Err(Error::NonPositiveHarmonic(_))
        ));
    }

    #[test]
    fn point_image_fixed_point_and_consistency() {
        let m = linear_motion();
        let z = c(0.1, -0.4);
        let ra = m.contraction(z).unwrap() * m.piece_radius();
        let p = m.point_image(&Address::fixed(3), z).unwrap();
        assert!((p - m.centers()[3] / (c(1.0, 0.0) - ra)).norm() < 1e-15);
        // repeating the tail index does not move the point
        let q = m.point_image(&Address::new(vec![3, 3, 3], 3), z).unwrap();
        assert!((p - q).norm() < 1e-15);
        // at λ = 0 the image is the deterministic render of the same word
        let base = m.ifs_at(c(0.0, 0.0)).unwrap();
        let cloud = render_limit_set(&base, RenderMethod::Deterministic { depth: 2 }).unwrap();
        let word = [4usize, 7usize];
        let idx = word[0] * 10 + word[1];
        let p = m.point_image(&Address::new(word.to_vec(), 0), c(0.0, 0.0)).unwrap();
        assert!((p - cloud.points[idx]).norm() < 1e-15);
        assert!(matches!(m.point_image(&Address::fixed(10), z), Err(Error::BadAddress { .. })));
    }

    #[test]
    fn prescribed_constant_target() {
        let u = InfHarmonicFn::new(vec![HarmonicFn::constant(1.5)]).unwrap();
        let cm = build_prescribed_motion(u.clone(), &[1000]).unwrap();
        let rec = cm.achieved_reciprocal(c(0.0, 0.0)).unwrap();
        assert!((rec - (1.5 + LN_2 / (2.0 * 1000f64.ln()))).abs() < 1e-15);
        assert!((rec - 1.550171).abs() < 1e-6);
        assert!((cm.excess(c(0.0, 0.0)).unwrap() - 0.050171).abs() < 1e-6);
        assert!((1.0 / rec - 0.645090).abs() < 1e-6);
        let cm10 = build_prescribed_motion(u, &[10]).unwrap();
        assert!((cm10.excess_bound() - 0.150515).abs() < 1e-6);
    }

    #[test]
    fn prescribed_errors() {
        let u = InfHarmonicFn::new(vec![HarmonicFn::constant(1.5)]).unwrap();
        assert!(matches!(build_prescribed_motion(u, &[10, 20]), Err(Error::BadArity(_))));
        // member 1/2 + (1 + Re λ) is fine, member exactly 1/2 is not
        let ok = InfHarmonicFn::new(vec![HarmonicFn::affine(1.0, 0.0, 1.5)]).unwrap();
        assert!(build_prescribed_motion(ok, &[10]).is_ok());
        let flat = InfHarmonicFn::new(vec![HarmonicFn::constant(0.5)]).unwrap();
        assert!(matches!(build_prescribed_motion(flat, &[10]), Err(Error::NonPositiveHarmonic(_))));
    }

    #[test]
    fn containers_are_disjoint_and_shrink() {
        let disks: Vec<Disk> = (0..6).map(container_disk).collect();
        for i in 0..disks.len() {
            assert!(Disk::unit().contains_disk(&disks[i]));
            for j in i + 1..disks.len() {
                assert!(disks[i].disjoint_from(&disks[j]));
            }
        }
        assert!(disks[5].center.norm() + disks[5].radius < 0.03);
    }

    #[test]
    fn composite_takes_smaller_reciprocal() {
        let u = InfHarmonicFn::new(vec![HarmonicFn::constant(1.5), HarmonicFn::constant(2.5)]).unwrap();
        let cm = build_prescribed_motion(u, &[10, 10]).unwrap();
        let first = &cm.components()[0].motion;
        for z in [c(0.0, 0.0), c(0.4, 0.1), c(-0.7, 0.0)] {
            assert_eq!(composite_dimension(&cm, z).unwrap(), first.dimension(z).unwrap());
        }
        let single = build_prescribed_motion(
            InfHarmonicFn::new(vec![HarmonicFn::affine(1.0, 0.0, 1.5)]).unwrap(),
            &[10],
        )
        .unwrap();
        let z = c(0.3, 0.2);
        assert_eq!(single.dimension(z).unwrap(), single.components()[0].motion.dimension(z).unwrap());
    }

    #[test]
    fn component_systems_live_in_containers() {
        let u = InfHarmonicFn::new(vec![HarmonicFn::constant(1.5), HarmonicFn::affine(0.5, 0.0, 2.0)]).unwrap();
        let cm = build_prescribed_motion(u, &[10, 12]).unwrap();
        for comp in cm.components() {
            let ifs = comp.ifs_at(c(0.2, -0.3)).unwrap();
            assert!(check_open_set_disks(&ifs).passed);
        }
        let cloud = cm.render(c(0.2, -0.3), RenderMethod::ChaosGame { count: 1001, seed: 1 }).unwrap();
        assert_eq!(cloud.len(), 1001);
        assert!(cloud.points.iter().all(|p| {
            cm.components().iter().any(|comp| (p - comp.container.center).norm() <= comp.container.radius + 1e-12)
        }));
    }
}
