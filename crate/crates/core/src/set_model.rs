//! Compact sets in the plane and membership predicates in ℂᵐ.
//!
//! A [`CompactSet`] is one of a few analytic shapes or a finite point cloud
//! standing in for a continuum. Every downstream estimator works on a
//! deterministic discretization of the set; disks are represented by their
//! boundary circle, which carries both the sup-norm of any polynomial and the
//! equilibrium measure.
//!
//! A [`SetPredicate`] describes a subset of ℂᵐ by membership and a bounding
//! box. [`Region`] is the serializable family of predicates (balls, products,
//! unitary or linear images, unions, intersections).

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexPoint = Complex64;

pub const DEFAULT_BOUNDARY_SAMPLES: usize = 4096;

/// Distance at which a point is considered to lie on a set.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

fn default_samples() -> usize {
    DEFAULT_BOUNDARY_SAMPLES
}

pub(crate) fn check_finite(z: ComplexPoint) -> Result<ComplexPoint> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Shape {
    Disk {
        center: ComplexPoint,
        radius: f64,
    },
    Segment {
        a: ComplexPoint,
        b: ComplexPoint,
    },
    Cloud {
        points: Vec<ComplexPoint>,
    },
    Union {
        parts: Vec<CompactSet>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCompactSet")]
pub struct CompactSet {
    #[serde(flatten)]
    shape: Shape,
    boundary_samples: usize,
}

#[derive(Deserialize)]
struct RawCompactSet {
    #[serde(flatten)]
    shape: Shape,
    #[serde(default = "default_samples")]
    boundary_samples: usize,
}

impl TryFrom<RawCompactSet> for CompactSet {
    type Error = Error;

    fn try_from(raw: RawCompactSet) -> Result<Self> {
        CompactSet::new(raw.shape)?.with_samples(raw.boundary_samples)
    }
}

impl CompactSet {
    pub fn new(shape: Shape) -> Result<Self> {
        match &shape {
            Shape::Disk { center, radius } => {
                check_finite(*center)?;
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidSet(format!("disk radius {radius} must be positive")));
                }
            }
            Shape::Segment { a, b } => {
                check_finite(*a)?;
                check_finite(*b)?;
                if a == b {
                    return Err(Error::InvalidSet("segment endpoints coincide".into()));
                }
            }
            Shape::Cloud { points } => {
                if points.is_empty() {
                    return Err(Error::EmptyPointCloud);
                }
                for p in points {
                    check_finite(*p)?;
                }
            }
            Shape::Union { parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidSet("union has no parts".into()));
                }
            }
        }
        Ok(CompactSet {
            shape,
            boundary_samples: DEFAULT_BOUNDARY_SAMPLES,
        })
    }

    pub fn disk(center: ComplexPoint, radius: f64) -> Result<Self> {
        Self::new(Shape::Disk { center, radius })
    }

    pub fn segment(a: ComplexPoint, b: ComplexPoint) -> Result<Self> {
        Self::new(Shape::Segment { a, b })
    }

    pub fn cloud(points: Vec<ComplexPoint>) -> Result<Self> {
        Self::new(Shape::Cloud { points })
    }

    pub fn union(parts: Vec<CompactSet>) -> Result<Self> {
        Self::new(Shape::Union { parts })
    }

    pub fn with_samples(mut self, boundary_samples: usize) -> Result<Self> {
        if boundary_samples == 0 {
            return Err(Error::InvalidSet("boundary_samples must be positive".into()));
        }
        self.boundary_samples = boundary_samples;
        Ok(self)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn boundary_samples(&self) -> usize {
        self.boundary_samples
    }

    /// Discretization at the set's own sampling density.
    pub fn samples(&self) -> Vec<ComplexPoint> {
        discretize(self, self.boundary_samples.max(2)).expect("validated set")
    }

    /// Whether `z` lies on the set up to `tol`. Disks are closed and filled.
    pub fn contains(&self, z: ComplexPoint, tol: f64) -> bool {
        match &self.shape {
            Shape::Disk { center, radius } => (z - center).norm() <= radius + tol,
            Shape::Segment { a, b } => distance_to_segment(z, *a, *b) <= tol,
            Shape::Cloud { points } => points.iter().any(|p| (z - p).norm() <= tol),
            Shape::Union { parts } => parts.iter().any(|p| p.contains(z, tol)),
        }
    }

    /// The image of the set under `z ↦ scale·z + shift`.
    pub fn affine(&self, scale: ComplexPoint, shift: ComplexPoint) -> Result<Self> {
        let map = |z: ComplexPoint| scale * z + shift;
        let shape = match &self.shape {
            Shape::Disk { center, radius } => Shape::Disk {
                center: map(*center),
                radius: radius * scale.norm(),
            },
            Shape::Segment { a, b } => Shape::Segment { a: map(*a), b: map(*b) },
            Shape::Cloud { points } => Shape::Cloud {
                points: points.iter().map(|&p| map(p)).collect(),
            },
            Shape::Union { parts } => Shape::Union {
                parts: parts
                    .iter()
                    .map(|p| p.affine(scale, shift))
                    .collect::<Result<_>>()?,
            },
        };
        CompactSet::new(shape)?.with_samples(self.boundary_samples)
    }

    /// Smallest axis-aligned box containing the set, as (re range, im range).
    pub fn bounding_box(&self) -> CoordBox {
        match &self.shape {
            Shape::Disk { center, radius } => CoordBox::around(*center, *radius),
            Shape::Segment { a, b } => CoordBox::from_points([*a, *b].iter()),
            Shape::Cloud { points } => CoordBox::from_points(points.iter()),
            Shape::Union { parts } => parts
                .iter()
                .map(CompactSet::bounding_box)
                .reduce(|x, y| x.hull(&y))
                .expect("union is nonempty"),
        }
    }
}

pub(crate) fn distance_to_segment(z: ComplexPoint, a: ComplexPoint, b: ComplexPoint) -> f64 {
    let d = b - a;
    let t = ((z - a) * d.conj()).re / d.norm_sqr();
    let t = t.clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

/// Deterministic discretization.
///
/// Disks are sampled on the boundary circle at uniform angles starting at
/// angle 0; segments at uniform parameter values including both endpoints.
/// Clouds no larger than `count` are returned whole, larger ones are
/// subsampled at evenly spaced indices.
pub fn discretize(set: &CompactSet, count: usize) -> Result<Vec<ComplexPoint>> {
    if count < 2 {
        return Err(Error::InvalidArgument(format!("discretize needs count >= 2, got {count}")));
    }
    Ok(match &set.shape {
        Shape::Disk { center, radius } => (0..count)
            .map(|k| center + Complex64::from_polar(*radius, TAU * k as f64 / count as f64))
            .collect(),
        Shape::Segment { a, b } => (0..count)
            .map(|k| {
                if k + 1 == count {
                    *b
                } else {
                    a + (b - a) * (k as f64 / (count - 1) as f64)
                }
            })
            .collect(),
        Shape::Cloud { points } => {
            if points.is_empty() {
                return Err(Error::EmptyPointCloud);
            }
            if points.len() <= count {
                points.clone()
            } else {
                (0..count).map(|k| points[k * points.len() / count]).collect()
            }
        }
        Shape::Union { parts } => {
            let mut out = Vec::new();
            for part in parts {
                out.extend(discretize(part, count)?);
            }
            out
        }
    })
}

/// Points of the discretization whose score is at most `threshold`, as a
/// point cloud. `None` when no point qualifies.
pub fn sublevel_subset<F>(set: &CompactSet, score: F, threshold: f64) -> Result<Option<CompactSet>>
where
    F: Fn(ComplexPoint) -> f64,
{
    let kept: Vec<_> = discretize(set, set.boundary_samples.max(2))?
        .into_iter()
        .filter(|&z| score(z) <= threshold)
        .collect();
    if kept.is_empty() {
        return Ok(None);
    }
    Ok(Some(CompactSet::cloud(kept)?.with_samples(set.boundary_samples)?))
}

/// Removes exact duplicates, keeping first occurrences in order.
pub fn distinct_points(points: &[ComplexPoint]) -> Vec<ComplexPoint> {
    let mut seen = std::collections::HashSet::with_capacity(points.len());
    points
        .iter()
        .copied()
        .filter(|z| seen.insert((z.re.to_bits(), z.im.to_bits())))
        .collect()
}

/// Real-and-imaginary box for one complex coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordBox {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl CoordBox {
    pub fn around(center: ComplexPoint, radius: f64) -> Self {
        CoordBox {
            re: (center.re - radius, center.re + radius),
            im: (center.im - radius, center.im + radius),
        }
    }

    fn from_points<'a>(points: impl Iterator<Item = &'a ComplexPoint>) -> Self {
        let mut b = CoordBox {
            re: (f64::INFINITY, f64::NEG_INFINITY),
            im: (f64::INFINITY, f64::NEG_INFINITY),
        };
        for p in points {
            b.re = (b.re.0.min(p.re), b.re.1.max(p.re));
            b.im = (b.im.0.min(p.im), b.im.1.max(p.im));
        }
        b
    }

    pub fn hull(&self, other: &CoordBox) -> CoordBox {
        CoordBox {
            re: (self.re.0.min(other.re.0), self.re.1.max(other.re.1)),
            im: (self.im.0.min(other.im.0), self.im.1.max(other.im.1)),
        }
    }

    pub fn intersect(&self, other: &CoordBox) -> CoordBox {
        CoordBox {
            re: (self.re.0.max(other.re.0), self.re.1.min(other.re.1)),
            im: (self.im.0.max(other.im.0), self.im.1.min(other.im.1)),
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.re.0, self.re.1, self.im.0, self.im.1].iter().all(|v| v.is_finite())
    }

    pub fn center(&self) -> ComplexPoint {
        Complex64::new(0.5 * (self.re.0 + self.re.1), 0.5 * (self.im.0 + self.im.1))
    }

    /// Radius of the smallest disk about `center()` containing the box.
    pub fn circumradius(&self) -> f64 {
        0.5 * (self.re.1 - self.re.0).hypot(self.im.1 - self.im.0)
    }

    /// `resolution × resolution` grid over the box, row-major in (im, re).
    pub fn grid(&self, resolution: usize) -> Vec<ComplexPoint> {
        let axis = |(lo, hi): (f64, f64), k: usize| {
            if resolution == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * k as f64 / (resolution - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(resolution * resolution);
        for j in 0..resolution {
            for i in 0..resolution {
                out.push(Complex64::new(axis(self.re, i), axis(self.im, j)));
            }
        }
        out
    }
}

/// A subset of ℂᵐ given by membership and a bounding box.
///
/// Implementations must be deterministic, and `bounding_box` must contain
/// every point for which `contains` is true.
pub trait SetPredicate: Send + Sync {
    fn dim(&self) -> usize;
    fn contains(&self, z: &[ComplexPoint]) -> bool;
    fn bounding_box(&self) -> Vec<CoordBox>;
}

/// Serializable predicates in ℂᵐ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Region {
    /// Closed Euclidean ball.
    Ball { center: Vec<ComplexPoint>, radius: f64 },
    /// Cartesian product of planar compacts, one per coordinate.
    Product { factors: Vec<CompactSet> },
    /// `{ A·x : x ∈ inner }` for an invertible matrix `A`.
    Image {
        matrix: Vec<Vec<ComplexPoint>>,
        inner: Box<Region>,
    },
    Union { parts: Vec<Region> },
    Intersection { parts: Vec<Region> },
}

impl Region {
    /// Checks dimensions, matrix shapes and invertibility.
    pub fn validate(&self) -> Result<usize> {
        match self {
            Region::Ball { center, radius } => {
                if center.is_empty() {
                    return Err(Error::InvalidSet("ball center is empty".into()));
                }
                for c in center {
                    check_finite(*c)?;
                }
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::InvalidSet("ball radius must be positive".into()));
                }
                Ok(center.len())
            }
            Region::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::InvalidSet("product has no factors".into()));
                }
                Ok(factors.len())
            }
            Region::Image { matrix, inner } => {
                let m = inner.validate()?;
                if matrix.len() != m || matrix.iter().any(|row| row.len() != m) {
                    return Err(Error::InvalidSet(format!("image matrix must be {m}x{m}")));
                }
                if solve(matrix, &vec![Complex64::new(0.0, 0.0); m]).is_none() {
                    return Err(Error::InvalidSet("image matrix is singular".into()));
                }
                Ok(m)
            }
            Region::Union { parts } | Region::Intersection { parts } => {
                let dims = parts.iter().map(Region::validate).collect::<Result<Vec<_>>>()?;
                match dims.split_first() {
                    None => Err(Error::InvalidSet("empty union/intersection".into())),
                    Some((d, rest)) if rest.iter().all(|x| x == d) => Ok(*d),
                    Some(_) => Err(Error::InvalidSet("mixed dimensions".into())),
                }
            }
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Region::Ball { center, .. } => center.len(),
            Region::Product { factors } => factors.len(),
            Region::Image { inner, .. } => inner.dimension(),
            Region::Union { parts } | Region::Intersection { parts } => {
                parts.first().map_or(0, Region::dimension)
            }
        }
    }
}

impl SetPredicate for Region {
    fn dim(&self) -> usize {
        self.dimension()
    }

    fn contains(&self, z: &[ComplexPoint]) -> bool {
        match self {
            Region::Ball { center, radius } => {
                let d2: f64 = z.iter().zip(center).map(|(a, c)| (a - c).norm_sqr()).sum();
                d2 <= radius * radius * (1.0 + 1e-12)
            }
            Region::Product { factors } => factors
                .iter()
                .zip(z)
                .all(|(f, &w)| f.contains(w, MEMBERSHIP_TOL)),
            Region::Image { matrix, inner } => match solve(matrix, z) {
                Some(x) => inner.contains(&x),
                None => false,
            },
            Region::Union { parts } => parts.iter().any(|p| p.contains(z)),
            Region::Intersection { parts } => parts.iter().all(|p| p.contains(z)),
        }
    }

    fn bounding_box(&self) -> Vec<CoordBox> {
        match self {
            Region::Ball { center, radius } => {
                center.iter().map(|&c| CoordBox::around(c, *radius)).collect()
            }
            Region::Product { factors } => factors.iter().map(CompactSet::bounding_box).collect(),
            Region::Image { matrix, inner } => {
                // Each input coordinate sits in a disk; push the disks through A.
                let disks: Vec<_> = inner
                    .bounding_box()
                    .iter()
                    .map(|b| (b.center(), b.circumradius()))
                    .collect();
                matrix
                    .iter()
                    .map(|row| {
                        let c: Complex64 = row.iter().zip(&disks).map(|(a, (c, _))| a * c).sum();
                        let r: f64 = row.iter().zip(&disks).map(|(a, (_, r))| a.norm() * r).sum();
                        CoordBox::around(c, r)
                    })
                    .collect()
            }
            Region::Union { parts } => parts
                .iter()
                .map(Region::bounding_box)
                .reduce(|a, b| a.iter().zip(&b).map(|(x, y)| x.hull(y)).collect())
                .unwrap_or_default(),
            Region::Intersection { parts } => parts
                .iter()
                .map(Region::bounding_box)
                .reduce(|a, b| a.iter().zip(&b).map(|(x, y)| x.intersect(y)).collect())
                .unwrap_or_default(),
        }
    }
}

/// Solves `A x = y` by Gaussian elimination with partial pivoting.
pub(crate) fn solve(a: &[Vec<ComplexPoint>], y: &[ComplexPoint]) -> Option<Vec<ComplexPoint>> {
    let m = y.len();
    let mut aug: Vec<Vec<Complex64>> = a
        .iter()
        .zip(y)
        .map(|(row, &yi)| row.iter().copied().chain(std::iter::once(yi)).collect())
        .collect();
    let scale = a.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| aug[i][col].norm().total_cmp(&aug[j][col].norm()))?;
        if aug[pivot][col].norm() <= 1e-14 * scale {
            return None;
        }
        aug.swap(col, pivot);
        for row in col + 1..m {
            let f = aug[row][col] / aug[col][col];
            let (upper, lower) = aug.split_at_mut(row);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= f * src;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); m];
    for row in (0..m).rev() {
        let s: Complex64 = (row + 1..m).map(|k| aug[row][k] * x[k]).sum();
        x[row] = (aug[row][m] - s) / aug[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        Complex64::new(re, im)
    }

    #[test]
    fn disk_four_points_are_quarter_turns() {
        let d = CompactSet::disk(c(0.0, 0.0), 1.0).unwrap();
        let pts = discretize(&d, 4).unwrap();
        let expected = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (p, e) in pts.iter().zip(expected) {
            assert!((p - e).norm() < 1e-15, "{p} vs {e}");
        }
    }

    #[test]
    fn segment_three_points() {
        let s = CompactSet::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(discretize(&s, 3).unwrap(), vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn small_cloud_is_returned_whole() {
        let s = CompactSet::cloud(vec![c(2.0, 0.0)]).unwrap();
        assert_eq!(discretize(&s, 10).unwrap(), vec![c(2.0, 0.0)]);
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(matches!(CompactSet::cloud(vec![]), Err(Error::EmptyPointCloud)));
        assert!(CompactSet::disk(c(0.0, 0.0), 0.0).is_err());
        assert!(CompactSet::segment(c(1.0, 1.0), c(1.0, 1.0)).is_err());
        assert!(matches!(CompactSet::disk(c(f64::NAN, 0.0), 1.0), Err(Error::NonFinite)));
        let d = CompactSet::disk(c(0.0, 0.0), 1.0).unwrap();
        assert!(discretize(&d, 1).is_err());
    }

    #[test]
    fn sublevel_examples() {
        let s = CompactSet::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap().with_samples(101).unwrap();
        let sub = sublevel_subset(&s, |z| z.norm(), 0.5).unwrap().unwrap();
        let pts = sub.samples();
        assert_eq!(pts.len(), 51);
        assert!(pts.iter().all(|z| z.norm() <= 0.5));

        let d = CompactSet::disk(c(0.0, 0.0), 1.0).unwrap();
        assert!(sublevel_subset(&d, |z| z.re, -2.0).unwrap().is_none());

        let cloud = CompactSet::cloud(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let sub = sublevel_subset(&cloud, |z| z.norm(), 1.0).unwrap().unwrap();
        assert_eq!(sub.samples(), vec![c(0.0, 0.0), c(1.0, 0.0)]);

        let all = sublevel_subset(&d, |z| z.re, f64::INFINITY).unwrap().unwrap();
        assert_eq!(all.samples(), d.samples());
    }

    #[test]
    fn json_shapes() {
        let d: CompactSet =
            serde_json::from_str(r#"{"shape":"disk","center":[0,0],"radius":2}"#).unwrap();
        assert_eq!(d.boundary_samples(), DEFAULT_BOUNDARY_SAMPLES);
        assert_eq!(d.shape(), &Shape::Disk { center: c(0.0, 0.0), radius: 2.0 });
        let u: CompactSet = serde_json::from_str(
            r#"{"shape":"union","parts":[{"shape":"segment","a":[-1,0],"b":[1,0]},
                {"shape":"cloud","points":[[3,0]]}],"boundary_samples":16}"#,
        )
        .unwrap();
        assert_eq!(u.boundary_samples(), 16);
        let back: CompactSet = serde_json::from_str(&serde_json::to_string(&u).unwrap()).unwrap();
        assert_eq!(back, u);
        assert!(serde_json::from_str::<CompactSet>(r#"{"shape":"cloud","points":[]}"#).is_err());
    }

    #[test]
    fn region_membership_and_boxes() {
        let unit = CompactSet::disk(c(0.0, 0.0), 1.0).unwrap();
        let bidisk = Region::Product { factors: vec![unit.clone(), unit] };
        assert_eq!(bidisk.validate().unwrap(), 2);
        assert!(bidisk.contains(&[c(0.5, 0.0), c(0.0, -1.0)]));
        assert!(!bidisk.contains(&[c(1.5, 0.0), c(0.0, 0.0)]));

        // Swap of coordinates as a linear image.
        let swap = vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
        let line = Region::Product {
            factors: vec![
                CompactSet::disk(c(0.0, 0.0), 1.0).unwrap(),
                CompactSet::cloud(vec![c(0.0, 0.0)]).unwrap(),
            ],
        };
        let swapped = Region::Image { matrix: swap, inner: Box::new(line) };
        assert!(swapped.contains(&[c(0.0, 0.0), c(0.3, 0.4)]));
        assert!(!swapped.contains(&[c(0.3, 0.4), c(0.0, 0.0)]));
        let bb = swapped.bounding_box();
        assert!(bb[1].re.0 <= -1.0 && bb[1].re.1 >= 1.0);
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(1.0, 0.0), c(3.0, 0.0)]];
        let x = vec![c(1.0, -1.0), c(0.5, 2.0)];
        let y: Vec<_> = a.iter().map(|row| row[0] * x[0] + row[1] * x[1]).collect();
        let got = solve(&a, &y).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).norm() < 1e-14);
        }
        assert!(solve(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]], &x).is_none());
    }
}
