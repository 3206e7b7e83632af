//! Γ-projections and Γ-capacity of sets in ℂᵐ.
//!
//! `Γ_m^{m−1}(K)` keeps the points `z ∈ ℂ^{m−1}` whose fiber
//! `{w : (z, w) ∈ K}` has positive capacity. Composing projections down to the
//! plane and taking the capacity there gives `Cap Γ_m^1(K)`; the Γ-capacity is
//! its supremum over unitary images of `K`, estimated here by a seeded
//! Monte-Carlo maximum that always includes the identity.
//!
//! Fibers are sampled on a regular grid over the bounding box of the last
//! coordinate, and a fiber counts as non-polar when its greedy Leja
//! transfinite diameter exceeds the threshold.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::capacity::{capacity_up_to, leja_diameter, DEFAULT_POLAR_THRESHOLD};
use crate::error::{Error, Result};
use crate::set_model::{CompactSet, ComplexPoint, CoordBox, Region, SetPredicate};

pub const MAX_DIMENSION: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    /// Grid points per real dimension in each fiber plane.
    pub fiber_resolution: usize,
    /// Grid points per real dimension in the final projected plane.
    pub projected_resolution: usize,
    /// Leja points used to decide fiber positivity.
    pub fiber_n: usize,
    pub fiber_threshold: f64,
    /// Fekete points for the capacity of the projected cloud. Filled grid
    /// clouds need this well below the number of boundary grid points.
    pub capacity_n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            fiber_resolution: 64,
            projected_resolution: 32,
            fiber_n: 16,
            fiber_threshold: DEFAULT_POLAR_THRESHOLD,
            capacity_n: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitarySample {
    /// Position in the sampled family; 0 is the identity.
    pub index: usize,
    pub seed: u64,
    pub matrix: Vec<Vec<Complex64>>,
}

impl UnitarySample {
    pub fn identity(m: usize, seed: u64) -> Self {
        let matrix = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        UnitarySample { index: 0, seed, matrix }
    }

    /// Haar-distributed unitary from the RNG stream `index` of `seed`.
    ///
    /// QR of a complex Gaussian matrix by modified Gram–Schmidt, which leaves
    /// a positive real diagonal in R.
    pub fn haar(m: usize, seed: u64, index: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let mut cols: Vec<Vec<Complex64>> = (0..m)
            .map(|_| {
                (0..m)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        Complex64::new(re, im)
                    })
                    .collect()
            })
            .collect();
        for j in 0..m {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[k];
                let proj: Complex64 = q.iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
                for (v, qi) in rest[0].iter_mut().zip(q) {
                    *v -= proj * qi;
                }
            }
            let norm = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            for v in cols[j].iter_mut() {
                *v /= norm;
            }
        }
        let matrix = (0..m).map(|i| (0..m).map(|j| cols[j][i]).collect()).collect();
        UnitarySample { index, seed, matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    /// Largest entry of `|U U* − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let m = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                let s: Complex64 = (0..m).map(|k| self.matrix[i][k] * self.matrix[j][k].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    fn adjoint(&self) -> Vec<Vec<Complex64>> {
        let m = self.dim();
        (0..m).map(|i| (0..m).map(|j| self.matrix[j][i].conj()).collect()).collect()
    }
}

/// `{ U·x : x ∈ inner }` with the inverse precomputed.
struct UnitaryImage {
    inverse: Vec<Vec<Complex64>>,
    inner: Arc<dyn SetPredicate>,
    bbox: Vec<CoordBox>,
}

impl UnitaryImage {
    fn new(u: &UnitarySample, inner: Arc<dyn SetPredicate>) -> Self {
        if u.matrix == UnitarySample::identity(u.dim(), u.seed).matrix {
            return UnitaryImage { inverse: u.adjoint(), bbox: inner.bounding_box(), inner };
        }
        // Same disk-pushing bound as Region::Image.
        let disks: Vec<_> = inner.bounding_box().iter().map(|b| (b.center(), b.circumradius())).collect();
        let bbox = u
            .matrix
            .iter()
            .map(|row| {
                let c: Complex64 = row.iter().zip(&disks).map(|(a, (c, _))| a * c).sum();
                let r: f64 = row.iter().zip(&disks).map(|(a, (_, r))| a.norm() * r).sum();
                CoordBox::around(c, r)
            })
            .collect();
        UnitaryImage { inverse: u.adjoint(), inner, bbox }
    }
}

impl SetPredicate for UnitaryImage {
    fn dim(&self) -> usize {
        self.inverse.len()
    }

    fn contains(&self, z: &[ComplexPoint]) -> bool {
        let mut x = [Complex64::new(0.0, 0.0); MAX_DIMENSION];
        for (xi, row) in x.iter_mut().zip(&self.inverse) {
            *xi = row.iter().zip(z).map(|(a, b)| a * b).sum();
        }
        self.inner.contains(&x[..z.len()])
    }

    fn bounding_box(&self) -> Vec<CoordBox> {
        self.bbox.clone()
    }
}

/// The Γ-projection of a set in ℂᵐ onto its first `m − 1` coordinates.
pub struct Projection {
    parent: Arc<dyn SetPredicate>,
    parent_box: Vec<CoordBox>,
    fiber_grid: Vec<ComplexPoint>,
    fiber_n: usize,
    threshold: f64,
}

impl Projection {
    /// Sampled fiber `{w : (z, w) ∈ K}` over the fiber grid.
    pub fn fiber(&self, z: &[ComplexPoint]) -> Vec<ComplexPoint> {
        let mut x = z.to_vec();
        x.push(Complex64::new(0.0, 0.0));
        let last = x.len() - 1;
        self.fiber_grid
            .iter()
            .copied()
            .filter(|&w| {
                x[last] = w;
                self.parent.contains(&x)
            })
            .collect()
    }

    fn in_box(&self, z: &[ComplexPoint]) -> bool {
        z.iter().zip(&self.parent_box).all(|(p, b)| {
            p.re >= b.re.0 && p.re <= b.re.1 && p.im >= b.im.0 && p.im <= b.im.1
        })
    }
}

impl SetPredicate for Projection {
    fn dim(&self) -> usize {
        self.parent_box.len() - 1
    }

    fn contains(&self, z: &[ComplexPoint]) -> bool {
        if !self.in_box(z) {
            return false;
        }
        let fiber = self.fiber(z);
        fiber.len() >= self.fiber_n && leja_diameter(&fiber, self.fiber_n) > self.threshold
    }

    fn bounding_box(&self) -> Vec<CoordBox> {
        self.parent_box[..self.parent_box.len() - 1].to_vec()
    }
}

/// Γ-projection `Γ_m^{m−1}`: true at `z` iff the sampled fiber over `z` has
/// capacity above the fiber threshold.
pub fn gamma_project(set: Arc<dyn SetPredicate>, grid: &GridSpec) -> Result<Projection> {
    let m = set.dim();
    if m < 2 {
        return Err(Error::InvalidArgument("Γ-projection needs dimension >= 2".into()));
    }
    let parent_box = set.bounding_box();
    if parent_box.len() != m || !parent_box.iter().all(CoordBox::is_finite) {
        return Err(Error::UnboundedSet);
    }
    Ok(Projection {
        fiber_grid: parent_box[m - 1].grid(grid.fiber_resolution),
        parent: set,
        parent_box,
        fiber_n: grid.fiber_n,
        threshold: grid.fiber_threshold,
    })
}

/// `Γ_m^1 = Γ_2^1 ∘ … ∘ Γ_m^{m−1}`, last coordinate projected first.
pub fn project_to_plane(set: Arc<dyn SetPredicate>, grid: &GridSpec) -> Result<Arc<dyn SetPredicate>> {
    let mut current = set;
    while current.dim() > 1 {
        current = Arc::new(gamma_project(current, grid)?);
    }
    Ok(current)
}

/// Grid points of the plane predicate's bounding box that belong to it.
pub fn sample_plane(set: &dyn SetPredicate, resolution: usize) -> Result<Vec<ComplexPoint>> {
    let bbox = set.bounding_box();
    if bbox.len() != 1 || !bbox[0].is_finite() {
        return Err(Error::UnboundedSet);
    }
    Ok(bbox[0].grid(resolution).into_iter().filter(|&z| set.contains(&[z])).collect())
}

/// A planar compact for one-dimensional regions that have an exact one.
fn planar_compact(region: &Region) -> Result<Option<CompactSet>> {
    Ok(match region {
        Region::Product { factors } if factors.len() == 1 => Some(factors[0].clone()),
        Region::Ball { center, radius } if center.len() == 1 => Some(CompactSet::disk(center[0], *radius)?),
        Region::Image { matrix, inner } if matrix.len() == 1 => match planar_compact(inner)? {
            Some(set) => Some(set.affine(matrix[0][0], Complex64::new(0.0, 0.0))?),
            None => None,
        },
        Region::Union { parts } if region.dimension() == 1 => {
            let sets = parts.iter().map(planar_compact).collect::<Result<Option<Vec<_>>>>()?;
            match sets {
                Some(sets) => Some(CompactSet::union(sets)?),
                None => None,
            }
        }
        _ => None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryValue {
    pub index: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaCapResult {
    pub value: f64,
    pub dimension: usize,
    pub best_unitary: UnitarySample,
    pub per_unitary: Vec<UnitaryValue>,
    pub fiber_threshold: f64,
    pub grid: GridSpec,
}

fn check_dimension(region: &Region) -> Result<usize> {
    let m = region.validate()?;
    if m > MAX_DIMENSION {
        return Err(Error::DimensionTooLarge(m));
    }
    Ok(m)
}

/// The planar compact `Γ_m^1(U·K)`.
fn projected_compact(region: &Region, u: &UnitarySample, grid: &GridSpec) -> Result<Option<CompactSet>> {
    if u.dim() == 1 {
        if let Some(set) = planar_compact(region)? {
            return Ok(Some(set.affine(u.matrix[0][0], Complex64::new(0.0, 0.0))?));
        }
    }
    let inner: Arc<dyn SetPredicate> = Arc::new(region.clone());
    if !inner.bounding_box().iter().all(CoordBox::is_finite) {
        return Err(Error::UnboundedSet);
    }
    let image: Arc<dyn SetPredicate> = Arc::new(UnitaryImage::new(u, inner));
    let plane = project_to_plane(image, grid)?;
    let cloud = sample_plane(plane.as_ref(), grid.projected_resolution)?;
    Ok(if cloud.is_empty() { None } else { Some(CompactSet::cloud(cloud)?) })
}

fn projected_capacity(region: &Region, u: &UnitarySample, grid: &GridSpec) -> Result<f64> {
    Ok(match projected_compact(region, u, grid)? {
        Some(set) => capacity_up_to(&set, grid.capacity_n)?.value,
        None => 0.0,
    })
}

/// Γ-capacity lower estimate: max over the identity and `unitary_count − 1`
/// Haar samples of `Cap Γ_m^1(U·K)`.
pub fn gamma_cap(region: &Region, unitary_count: usize, seed: u64, grid: &GridSpec) -> Result<GammaCapResult> {
    let m = check_dimension(region)?;
    if unitary_count == 0 {
        return Err(Error::InvalidArgument("unitary_count must be at least 1".into()));
    }
    let mut per_unitary = Vec::with_capacity(unitary_count);
    let mut best: Option<(f64, UnitarySample)> = None;
    for index in 0..unitary_count {
        let u = if index == 0 {
            UnitarySample::identity(m, seed)
        } else {
            UnitarySample::haar(m, seed, index)
        };
        let value = projected_capacity(region, &u, grid)?;
        per_unitary.push(UnitaryValue { index, value });
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, u));
        }
    }
    let (value, best_unitary) = best.expect("at least one unitary");
    Ok(GammaCapResult {
        value,
        dimension: m,
        best_unitary,
        per_unitary,
        fiber_threshold: grid.fiber_threshold,
        grid: *grid,
    })
}

/// The planar witness `Γ_m^1(U_best·K)` and its unitary.
pub fn reduce_to_m1(region: &Region, result: &GammaCapResult) -> Result<(CompactSet, UnitarySample)> {
    if result.value <= result.fiber_threshold {
        return Err(Error::GammaPolar {
            value: result.value,
            threshold: result.fiber_threshold,
        });
    }
    check_dimension(region)?;
    let set = projected_compact(region, &result.best_unitary, &result.grid)?.ok_or(Error::GammaPolar {
        value: 0.0,
        threshold: result.fiber_threshold,
    })?;
    Ok((set, result.best_unitary.clone()))
}
