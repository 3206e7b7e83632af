//! Logarithmic capacity, Fekete points and Green functions for compacts in ℂ.
//!
//! Capacity is estimated as a transfinite diameter: a greedy Leja selection
//! over a candidate grid is refined by single-point exchanges until no swap
//! increases the log-Vandermonde sum. The resulting Fekete polynomial
//! `F(z) = ∏ (z − ζᵢ)` also yields a Chebyshev-norm estimate
//! `‖F‖_K^{1/n}`; both are upper estimates of the capacity and the smaller
//! one is reported.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::extended_f64;
use crate::set_model::{discretize, distinct_points, CompactSet, ComplexPoint, Shape};

/// Capacity values at or below this are treated as polar.
pub const DEFAULT_POLAR_THRESHOLD: f64 = 1e-4;
pub const DEFAULT_FEKETE_N: usize = 128;
/// Point clouds with fewer distinct points are finite sets, hence polar.
pub const MIN_CONTINUUM_POINTS: usize = 8;

const MAX_EXCHANGE_SWEEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeketeResult {
    pub points: Vec<ComplexPoint>,
    /// Σ_{i<j} log|ζᵢ − ζⱼ|.
    pub log_vdm: f64,
    /// `(n, d_n)` pairs in increasing `n`, ending at the requested `n`.
    pub diameter_sequence: Vec<(usize, f64)>,
    /// `(max over the candidates of |F|)^{1/n}`; `+∞` when every candidate was selected.
    #[serde(with = "extended_f64")]
    pub chebyshev_estimate: f64,
    /// Fewer than `n` distinct candidates were available.
    pub degenerate: bool,
}

impl FeketeResult {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn transfinite_diameter(&self) -> f64 {
        diameter_from_log_vdm(self.log_vdm, self.points.len())
    }
}

pub(crate) fn diameter_from_log_vdm(log_vdm: f64, n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    (2.0 * log_vdm / (n * (n - 1)) as f64).exp()
}

/// Sum of pairwise log-distances.
pub fn log_vandermonde(points: &[ComplexPoint]) -> f64 {
    let mut s = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            s += (a - b).norm().ln();
        }
    }
    s
}

/// An `n`-point configuration on a candidate list with its discrete potentials.
struct Configuration<'a> {
    candidates: &'a [ComplexPoint],
    selected: Vec<usize>,
    is_selected: Vec<bool>,
    /// For unselected `j`: Σ_k log|c_j − ζ_k|. For selected `j`: the same sum over the other points.
    potential: Vec<f64>,
}

impl<'a> Configuration<'a> {
    /// Greedy Leja selection starting from the candidate of largest modulus.
    fn leja(candidates: &'a [ComplexPoint], n: usize) -> Self {
        let m = candidates.len();
        let mut cfg = Configuration {
            candidates,
            selected: Vec::with_capacity(n),
            is_selected: vec![false; m],
            potential: vec![0.0; m],
        };
        let first = argmax((0..m).map(|j| candidates[j].norm()));
        cfg.add(first);
        while cfg.selected.len() < n {
            let next = argmax((0..m).map(|j| {
                if cfg.is_selected[j] {
                    f64::NEG_INFINITY
                } else {
                    cfg.potential[j]
                }
            }));
            cfg.add(next);
        }
        cfg
    }

    fn add(&mut self, idx: usize) {
        let z = self.candidates[idx];
        for (j, c) in self.candidates.iter().enumerate() {
            if j != idx {
                self.potential[j] += (c - z).norm().ln();
            }
        }
        self.selected.push(idx);
        self.is_selected[idx] = true;
    }

    fn recompute(&mut self) {
        for (j, c) in self.candidates.iter().enumerate() {
            self.potential[j] = self
                .selected
                .iter()
                .filter(|&&k| k != j)
                .map(|&k| (c - self.candidates[k]).norm().ln())
                .sum();
        }
    }

    /// Pairwise-exchange refinement; stops when a full sweep makes no swap.
    fn refine(&mut self) {
        for _ in 0..MAX_EXCHANGE_SWEEPS {
            let mut swapped = false;
            for slot in 0..self.selected.len() {
                let old = self.selected[slot];
                let zo = self.candidates[old];
                let current = self.potential[old];
                let mut best = (current, old);
                for (j, c) in self.candidates.iter().enumerate() {
                    if self.is_selected[j] {
                        continue;
                    }
                    let gain = self.potential[j] - (c - zo).norm().ln();
                    if gain > best.0 {
                        best = (gain, j);
                    }
                }
                let (gain, new) = best;
                if new == old || gain <= current + 1e-12 * current.abs().max(1.0) {
                    continue;
                }
                let zn = self.candidates[new];
                for (j, c) in self.candidates.iter().enumerate() {
                    if j == new {
                        self.potential[j] -= (zn - zo).norm().ln();
                    } else if j == old {
                        self.potential[j] += (zo - zn).norm().ln();
                    } else {
                        self.potential[j] += (c - zn).norm().ln() - (c - zo).norm().ln();
                    }
                }
                self.selected[slot] = new;
                self.is_selected[old] = false;
                self.is_selected[new] = true;
                swapped = true;
            }
            self.recompute();
            if !swapped {
                break;
            }
        }
    }

    fn log_vdm(&self) -> f64 {
        0.5 * self.selected.iter().map(|&k| self.potential[k]).sum::<f64>()
    }

    fn points(&self) -> Vec<ComplexPoint> {
        self.selected.iter().map(|&k| self.candidates[k]).collect()
    }

    /// max over unselected candidates of (1/n)·log|F|.
    fn log_chebyshev(&self) -> f64 {
        let n = self.selected.len() as f64;
        self.potential
            .iter()
            .zip(&self.is_selected)
            .filter(|(_, &s)| !s)
            .map(|(p, _)| p / n)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Index of the largest value; the first one wins ties.
fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, v) in values.enumerate() {
        if v > best.0 {
            best = (v, i);
        }
    }
    best.1
}

fn optimized(candidates: &[ComplexPoint], n: usize) -> Configuration<'_> {
    let mut cfg = Configuration::leja(candidates, n);
    cfg.refine();
    cfg
}

/// Approximate Fekete points: Leja selection over `candidates` sample points
/// of the set, refined by pairwise exchange.
pub fn fekete_points(set: &CompactSet, n: usize, candidates: usize) -> Result<FeketeResult> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("fekete_points needs n >= 2, got {n}")));
    }
    if candidates < n {
        return Err(Error::InvalidArgument(format!(
            "candidate count {candidates} is smaller than n = {n}"
        )));
    }
    let cands = distinct_points(&discretize(set, candidates)?);
    Ok(fekete_on_candidates(&cands, n))
}

pub(crate) fn fekete_on_candidates(cands: &[ComplexPoint], n: usize) -> FeketeResult {
    if cands.len() < n {
        let points = cands.to_vec();
        return FeketeResult {
            log_vdm: log_vandermonde(&points),
            points,
            diameter_sequence: Vec::new(),
            chebyshev_estimate: f64::INFINITY,
            degenerate: true,
        };
    }
    let cfg = optimized(cands, n);
    let log_vdm = cfg.log_vdm();
    let chebyshev_estimate = if cands.len() > n {
        cfg.log_chebyshev().exp()
    } else {
        f64::INFINITY
    };

    let mut diameter_sequence = vec![(n, diameter_from_log_vdm(log_vdm, n))];
    let mut k = n / 2;
    while k >= 2 {
        let sub = optimized(cands, k);
        diameter_sequence.push((k, diameter_from_log_vdm(sub.log_vdm(), k)));
        k /= 2;
    }
    diameter_sequence.reverse();

    FeketeResult {
        points: cfg.points(),
        log_vdm,
        diameter_sequence,
        chebyshev_estimate,
        degenerate: false,
    }
}

/// Greedy Leja transfinite diameter `d_n` only, without exchange refinement.
///
/// A lower estimate of the refined `d_n`, used where only the polar/non-polar
/// dichotomy matters. Zero when fewer than `n` distinct points are given.
pub fn leja_diameter(points: &[ComplexPoint], n: usize) -> f64 {
    let cands = distinct_points(points);
    if cands.len() < n.max(2) {
        return 0.0;
    }
    diameter_from_log_vdm(Configuration::leja(&cands, n).log_vdm(), n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    pub n_used: usize,
    /// `|d_{⌊n/2⌋} − d_n|`.
    pub error_indicator: f64,
    #[serde(with = "extended_f64")]
    pub robin_constant: f64,
    pub transfinite_diameter: f64,
    #[serde(with = "extended_f64")]
    pub chebyshev_estimate: f64,
    pub diameter_sequence: Vec<(usize, f64)>,
    pub degenerate: bool,
}

impl CapacityEstimate {
    pub fn is_polar(&self, threshold: f64) -> bool {
        self.value <= threshold
    }
}

fn estimate_from(fk: &FeketeResult) -> CapacityEstimate {
    if fk.degenerate {
        return CapacityEstimate {
            value: 0.0,
            n_used: fk.n(),
            error_indicator: 0.0,
            robin_constant: f64::INFINITY,
            transfinite_diameter: fk.transfinite_diameter(),
            chebyshev_estimate: fk.chebyshev_estimate,
            diameter_sequence: fk.diameter_sequence.clone(),
            degenerate: true,
        };
    }
    let d_n = fk.transfinite_diameter();
    let value = d_n.min(fk.chebyshev_estimate);
    let half = fk.n() / 2;
    let error_indicator = fk
        .diameter_sequence
        .iter()
        .find(|(k, _)| *k == half)
        .map_or(0.0, |(_, d)| (d - d_n).abs());
    CapacityEstimate {
        value,
        n_used: fk.n(),
        error_indicator,
        robin_constant: if value > 0.0 { 0.0 - value.ln() } else { f64::INFINITY },
        transfinite_diameter: d_n,
        chebyshev_estimate: fk.chebyshev_estimate,
        diameter_sequence: fk.diameter_sequence.clone(),
        degenerate: false,
    }
}

/// Capacity from `n` Fekete points over the set's own discretization.
///
/// Sets with fewer than `n` distinct sample points are finite and get value 0.
pub fn capacity(set: &CompactSet, n: usize) -> Result<CapacityEstimate> {
    Ok(capacity_with_points(set, n)?.0)
}

fn capacity_with_points(set: &CompactSet, n: usize) -> Result<(CapacityEstimate, FeketeResult)> {
    if n < MIN_CONTINUUM_POINTS {
        return Err(Error::InvalidArgument(format!("capacity needs n >= 8, got {n}")));
    }
    let cands = distinct_points(&set.samples());
    let fk = fekete_on_candidates(&cands, n);
    Ok((estimate_from(&fk), fk))
}

/// Capacity with `n = min(max_n, #distinct samples / 2)`, leaving unselected
/// candidates for the Chebyshev-norm estimate. Clouds with fewer than
/// [`MIN_CONTINUUM_POINTS`] distinct points are polar.
pub fn capacity_up_to(set: &CompactSet, max_n: usize) -> Result<CapacityEstimate> {
    Ok(capacity_up_to_with_points(set, max_n)?.0)
}

fn capacity_up_to_with_points(
    set: &CompactSet,
    max_n: usize,
) -> Result<(CapacityEstimate, FeketeResult)> {
    let distinct = distinct_points(&set.samples()).len();
    let n = (distinct / 2).min(max_n).max(MIN_CONTINUUM_POINTS);
    capacity_with_points(set, n)
}

/// `−log cap(K)`, or `+∞` for a polar set.
pub fn robin_constant(set: &CompactSet) -> Result<f64> {
    let est = capacity_up_to(set, DEFAULT_FEKETE_N)?;
    Ok(if est.is_polar(DEFAULT_POLAR_THRESHOLD) {
        f64::INFINITY
    } else {
        est.robin_constant
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GreenMethod {
    #[default]
    Auto,
    Analytic,
    Fekete,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenOptions {
    pub method: GreenMethod,
    /// Largest Fekete configuration used by the potential backing.
    pub fekete_n: usize,
    pub polar_threshold: f64,
}

impl Default for GreenOptions {
    fn default() -> Self {
        GreenOptions {
            method: GreenMethod::Auto,
            fekete_n: DEFAULT_FEKETE_N,
            polar_threshold: DEFAULT_POLAR_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GreenBacking {
    AnalyticDisk { center: ComplexPoint, radius: f64 },
    AnalyticSegment { a: ComplexPoint, b: ComplexPoint },
    FeketePotential { points: Vec<ComplexPoint>, capacity: f64 },
}

/// One evaluation of the Green function; `clamp` is how far below zero the
/// raw value was before clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenSample {
    pub value: f64,
    pub clamp: f64,
}

/// Evaluates `g_Ω(z, ∞)` for Ω the complement of a compact set.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenEvaluator {
    backing: GreenBacking,
    domain_set: CompactSet,
    robin: f64,
}

impl GreenEvaluator {
    pub fn backing(&self) -> &GreenBacking {
        &self.backing
    }

    pub fn domain_set(&self) -> &CompactSet {
        &self.domain_set
    }

    /// `lim_{z→∞} g(z) − log|z|` for this backing.
    pub fn robin_constant(&self) -> f64 {
        self.robin
    }

    pub fn capacity(&self) -> f64 {
        (-self.robin).exp()
    }

    pub fn eval(&self, z: ComplexPoint) -> f64 {
        self.eval_detailed(z).value
    }

    pub fn eval_detailed(&self, z: ComplexPoint) -> GreenSample {
        let raw = match &self.backing {
            GreenBacking::AnalyticDisk { center, radius } => {
                let r = (z - center).norm();
                if r <= *radius {
                    0.0
                } else {
                    (r / radius).ln()
                }
            }
            GreenBacking::AnalyticSegment { a, b } => {
                let w = (2.0 * z - (a + b)) / (b - a);
                let one = Complex64::new(1.0, 0.0);
                (w + (w - one).sqrt() * (w + one).sqrt()).norm().ln()
            }
            GreenBacking::FeketePotential { points, .. } => {
                if self.domain_set.contains(z, 0.0) {
                    0.0
                } else {
                    let n = points.len() as f64;
                    points.iter().map(|p| (z - p).norm().ln()).sum::<f64>() / n + self.robin
                }
            }
        };
        if raw >= 0.0 {
            GreenSample { value: raw, clamp: 0.0 }
        } else {
            GreenSample { value: 0.0, clamp: -raw }
        }
    }
}

pub fn green_function(set: &CompactSet, method: GreenMethod) -> Result<GreenEvaluator> {
    green_function_with(set, &GreenOptions { method, ..GreenOptions::default() })
}

pub fn green_function_with(set: &CompactSet, opts: &GreenOptions) -> Result<GreenEvaluator> {
    let analytic = match (opts.method, set.shape()) {
        (GreenMethod::Fekete, _) => None,
        (_, Shape::Disk { center, radius }) => Some(GreenBacking::AnalyticDisk {
            center: *center,
            radius: *radius,
        }),
        (_, Shape::Segment { a, b }) => Some(GreenBacking::AnalyticSegment { a: *a, b: *b }),
        (GreenMethod::Analytic, _) => {
            return Err(Error::InvalidArgument(
                "analytic Green function is only available for disks and segments".into(),
            ))
        }
        (GreenMethod::Auto, _) => None,
    };
    if let Some(backing) = analytic {
        let robin = match &backing {
            GreenBacking::AnalyticDisk { radius, .. } => 0.0 - radius.ln(),
            GreenBacking::AnalyticSegment { a, b } => 0.0 - ((b - a).norm() / 4.0).ln(),
            GreenBacking::FeketePotential { .. } => unreachable!(),
        };
        return Ok(GreenEvaluator {
            backing,
            domain_set: set.clone(),
            robin,
        });
    }

    let (est, fk) = capacity_up_to_with_points(set, opts.fekete_n)?;
    if est.is_polar(opts.polar_threshold) {
        return Err(Error::GreenUndefinedPolarSet { capacity: est.value });
    }
    Ok(GreenEvaluator {
        backing: GreenBacking::FeketePotential {
            points: fk.points,
            capacity: est.value,
        },
        domain_set: set.clone(),
        robin: est.robin_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, TAU};

    fn c(re: f64, im: f64) -> ComplexPoint {
        Complex64::new(re, im)
    }

    fn unit_disk() -> CompactSet {
        CompactSet::disk(c(0.0, 0.0), 1.0).unwrap()
    }

    fn unit_segment() -> CompactSet {
        CompactSet::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()
    }

    /// Brute force over a 64-step angular grid with the first point pinned at 1.
    fn brute_force_circle_d4() -> f64 {
        let grid: Vec<_> = (0..64).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 64.0)).collect();
        let mut best = f64::NEG_INFINITY;
        for a in 1..64 {
            for b in a + 1..64 {
                for d in b + 1..64 {
                    best = best.max(log_vandermonde(&[grid[0], grid[a], grid[b], grid[d]]));
                }
            }
        }
        diameter_from_log_vdm(best, 4)
    }

    #[test]
    fn disk_four_fekete_points() {
        let oracle = brute_force_circle_d4();
        assert!((oracle - 4f64.powf(1.0 / 3.0)).abs() < 1e-12);
        let fk = fekete_points(&unit_disk(), 4, 4096).unwrap();
        assert!((fk.transfinite_diameter() - oracle).abs() < 1e-9);
        // A rotated copy of the fourth roots of unity: z⁴ is the same for all four.
        let w = fk.points[0].powi(4);
        for p in &fk.points {
            assert!((p.norm() - 1.0).abs() < 1e-12);
            assert!((p.powi(4) - w).norm() < 1e-6);
        }
    }

    #[test]
    fn segment_two_points_are_endpoints() {
        let fk = fekete_points(&unit_segment(), 2, 4096).unwrap();
        let mut xs: Vec<f64> = fk.points.iter().map(|p| p.re).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs, vec![-1.0, 1.0]);
        assert!((fk.transfinite_diameter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_point_is_degenerate() {
        let s = CompactSet::cloud(vec![c(0.0, 0.0)]).unwrap();
        let fk = fekete_points(&s, 2, 2).unwrap();
        assert!(fk.degenerate);
        let est = capacity(&s, 8).unwrap();
        assert_eq!(est.value, 0.0);
        assert!(est.robin_constant.is_infinite());
        assert!(robin_constant(&s).unwrap().is_infinite());
    }

    #[test]
    fn exchange_refinement_finds_a_local_optimum() {
        // Leja on an irregular cloud is generally not exchange-optimal; after
        // refinement no single swap improves log_vdm.
        let cloud: Vec<_> = (0..300)
            .map(|k| {
                let t = k as f64 * 0.7548776662;
                c((t * 3.1).sin() * (1.0 + 0.3 * (t * 5.0).cos()), (t * 2.3).cos())
            })
            .collect();
        let cands = distinct_points(&cloud);
        let n = 12;
        let cfg = optimized(&cands, n);
        let pts = cfg.points();
        let base = log_vandermonde(&pts);
        assert!((base - cfg.log_vdm()).abs() < 1e-9);
        for slot in 0..n {
            for (j, cand) in cands.iter().enumerate() {
                if cfg.is_selected[j] {
                    continue;
                }
                let mut trial = pts.clone();
                trial[slot] = *cand;
                assert!(log_vandermonde(&trial) <= base + 1e-9);
            }
        }
        let leja = Configuration::leja(&cands, n).log_vdm();
        assert!(cfg.log_vdm() >= leja);
    }

    #[test]
    fn capacity_closed_forms() {
        let disk = capacity(&unit_disk(), 128).unwrap();
        assert!((0.92..=1.08).contains(&disk.value), "{disk:?}");
        assert!(disk.value <= disk.transfinite_diameter);
        // Roots of unity are exact Fekete points: d_128 = 128^{1/127}.
        assert!((disk.transfinite_diameter - 128f64.powf(1.0 / 127.0)).abs() < 1e-9);

        let seg = capacity(&unit_segment(), 128).unwrap();
        assert!((0.45..=0.55).contains(&seg.value), "{seg:?}");

        let shifted = capacity(&CompactSet::disk(c(5.0, 5.0), 3.0).unwrap(), 128).unwrap();
        assert!((shifted.value / 3.0 - 1.0).abs() < 0.1);
    }

    #[test]
    fn diameter_sequence_is_non_increasing() {
        for set in [unit_disk(), unit_segment()] {
            let est = capacity(&set, 64).unwrap();
            for w in est.diameter_sequence.windows(2) {
                assert!(w[1].1 <= w[0].1 + 1e-9, "{:?}", est.diameter_sequence);
            }
            assert_eq!(est.diameter_sequence.last().unwrap().0, 64);
        }
    }

    #[test]
    fn capacity_scales_with_the_set() {
        for set in [unit_disk(), unit_segment()] {
            let base = capacity(&set, 32).unwrap().value;
            for lambda in [c(2.0, 0.0), c(1.0, 1.0)] {
                let scaled = capacity(&set.affine(lambda, c(0.0, 0.0)).unwrap(), 32).unwrap().value;
                assert!((scaled / (lambda.norm() * base) - 1.0).abs() < 0.01);
            }
        }
    }

    #[test]
    fn capacity_is_monotone_under_inclusion() {
        let big = unit_segment().with_samples(1025).unwrap();
        let small_pts: Vec<_> = big.samples().into_iter().filter(|z| z.re.abs() <= 0.5).collect();
        let small = CompactSet::cloud(small_pts).unwrap();
        let a = capacity(&small, 64).unwrap().value;
        let b = capacity(&big, 64).unwrap().value;
        assert!(a <= b + 1e-9);
        assert!((a / 0.25 - 1.0).abs() < 0.1);
    }

    #[test]
    fn green_function_examples() {
        let g = green_function(&unit_disk(), GreenMethod::Auto).unwrap();
        assert!((g.eval(c(2.0, 0.0)) - LN_2).abs() < 1e-15);
        assert_eq!(g.eval(c(0.5, 0.0)), 0.0);
        let s = green_function(&unit_segment(), GreenMethod::Auto).unwrap();
        assert!((s.eval(c(2.0, 0.0)) - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-14);
        // The branch stays positive on the negative real axis and off the axis.
        assert!((s.eval(c(-2.0, 0.0)) - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-14);
        assert!(s.eval(c(0.0, 1e-3)) > 0.0);
        assert!(s.eval(c(0.3, 0.0)) < 1e-15);
        assert!(matches!(
            green_function(&CompactSet::cloud(vec![c(0.0, 0.0)]).unwrap(), GreenMethod::Auto),
            Err(Error::GreenUndefinedPolarSet { .. })
        ));
        assert!(green_function(&CompactSet::cloud(vec![c(0.0, 0.0)]).unwrap(), GreenMethod::Analytic).is_err());
    }

    #[test]
    fn fekete_green_tracks_analytic_green() {
        let analytic = green_function(&unit_disk(), GreenMethod::Analytic).unwrap();
        let fekete = green_function(&unit_disk(), GreenMethod::Fekete).unwrap();
        for k in 0..100 {
            let z = Complex64::from_polar(2.0, TAU * (k as f64 + 0.37) / 100.0);
            assert!((fekete.eval(z) - analytic.eval(z)).abs() <= 0.02);
        }
        assert_eq!(fekete.eval(c(0.2, 0.1)), 0.0);
    }

    #[test]
    fn green_minus_log_tends_to_robin() {
        for set in [unit_disk(), unit_segment(), CompactSet::disk(c(1.0, -2.0), 0.5).unwrap()] {
            for method in [GreenMethod::Analytic, GreenMethod::Fekete] {
                let g = green_function(&set, method).unwrap();
                for r in [1e3, 1e4] {
                    let z = Complex64::from_polar(r, 0.3);
                    let tol = if r == 1e4 { 1e-3 } else { 1e-2 };
                    assert!((g.eval(z) - r.ln() - g.robin_constant()).abs() < tol);
                }
            }
        }
    }

    #[test]
    fn robin_constants() {
        assert!(robin_constant(&unit_disk()).unwrap().abs() < 0.01);
        let seg = robin_constant(&unit_segment()).unwrap();
        assert!((seg / LN_2 - 1.0).abs() < 0.1);
        let e_disk = robin_constant(&CompactSet::disk(c(0.0, 0.0), std::f64::consts::E).unwrap()).unwrap();
        assert!((e_disk + 1.0).abs() < 0.01);
    }

    #[test]
    fn leja_diameter_dichotomy() {
        let five: Vec<_> = (0..5).map(|k| c(k as f64, 0.0)).collect();
        assert_eq!(leja_diameter(&five, 16), 0.0);
        let circle = unit_disk().samples();
        assert!(leja_diameter(&circle, 16) > 0.9);
    }
}
