//! Polynomial sup-norms on compacts and the Bernstein growth bound
//! `|P(z)| ≤ ‖P‖_K · exp(deg P · g_Ω(z, ∞))`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::capacity::{green_function, GreenBacking, GreenEvaluator, GreenMethod};
use crate::error::{Error, Result};
use crate::set_model::{check_finite, CompactSet, ComplexPoint, Shape};

/// Univariate complex polynomial, coefficients in ascending degree with no
/// trailing zeros. The zero polynomial has no coefficients and no degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolynomial")]
pub struct Polynomial1D {
    coefficients: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawPolynomial {
    coefficients: Vec<Complex64>,
}

impl TryFrom<RawPolynomial> for Polynomial1D {
    type Error = Error;

    fn try_from(raw: RawPolynomial) -> Result<Self> {
        for c in &raw.coefficients {
            check_finite(*c)?;
        }
        Ok(Polynomial1D::new(raw.coefficients))
    }
}

impl Polynomial1D {
    pub fn new(mut coefficients: Vec<Complex64>) -> Self {
        while coefficients.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coefficients.pop();
        }
        Polynomial1D { coefficients }
    }

    pub fn zero() -> Self {
        Polynomial1D { coefficients: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c · zⁿ`.
    pub fn monomial(n: usize, c: Complex64) -> Self {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); n + 1];
        coefficients[n] = c;
        Self::new(coefficients)
    }

    /// Chebyshev polynomial of the first kind via `T_{k+1} = 2z T_k − T_{k−1}`.
    pub fn chebyshev(n: usize) -> Self {
        let mut prev = vec![1.0];
        if n == 0 {
            return Self::from_real(&prev);
        }
        let mut cur = vec![0.0, 1.0];
        for _ in 1..n {
            let mut next = vec![0.0; cur.len() + 1];
            for (k, c) in cur.iter().enumerate() {
                next[k + 1] += 2.0 * c;
            }
            for (k, c) in prev.iter().enumerate() {
                next[k] -= c;
            }
            prev = cur;
            cur = next;
        }
        Self::from_real(&cur)
    }

    pub fn from_real(coefficients: &[f64]) -> Self {
        Self::new(coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn eval(&self, z: ComplexPoint) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coefficients.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coefficients.len().max(other.coefficients.len());
        let zero = Complex64::new(0.0, 0.0);
        Self::new(
            (0..len)
                .map(|k| {
                    self.coefficients.get(k).copied().unwrap_or(zero)
                        + other.coefficients.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Upper bound for `|p(z)|` on `|z| ≤ radius`.
    fn majorant(&self, radius: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * radius + c.norm())
    }
}

/// Sampled sup-norm with the sampling density and its a-priori error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub value: f64,
    pub samples: usize,
    /// Lipschitz bound × half the sample spacing, before local refinement.
    pub density_error: f64,
}

const MAX_SUP_SAMPLES: usize = 1 << 18;
const GOLDEN_ITERATIONS: usize = 80;

/// Largest value of `|p|` on the set, as a lower bound of the true sup-norm.
pub fn sup_norm(p: &Polynomial1D, set: &CompactSet) -> f64 {
    sup_norm_detailed(p, set).value
}

pub fn sup_norm_detailed(p: &Polynomial1D, set: &CompactSet) -> SupNorm {
    if p.is_zero() {
        return SupNorm { value: 0.0, samples: 0, density_error: 0.0 };
    }
    match set.shape() {
        Shape::Disk { center, radius } => {
            let (c, r) = (*center, *radius);
            let f = |t: f64| p.eval(c + Complex64::from_polar(r, t)).norm();
            // |d/dθ p(c + r e^{iθ})| ≤ r · max |p'| over |z| ≤ |c| + r.
            let lip = r * p.derivative().majorant(c.norm() + r);
            refine_periodic(f, TAU, lip, set.boundary_samples())
        }
        Shape::Segment { a, b } => {
            let (a, b) = (*a, *b);
            let f = |t: f64| p.eval(a + (b - a) * t).norm();
            let lip = (b - a).norm() * p.derivative().majorant(a.norm().max(b.norm()));
            refine_interval(f, lip, set.boundary_samples())
        }
        Shape::Cloud { points } => SupNorm {
            value: points.iter().map(|&z| p.eval(z).norm()).fold(0.0, f64::max),
            samples: points.len(),
            density_error: 0.0,
        },
        Shape::Union { parts } => parts
            .iter()
            .map(|part| sup_norm_detailed(p, part))
            .fold(SupNorm { value: 0.0, samples: 0, density_error: 0.0 }, |acc, s| SupNorm {
                value: acc.value.max(s.value),
                samples: acc.samples + s.samples,
                density_error: acc.density_error.max(s.density_error),
            }),
    }
}

/// Sample count so that `lip · spacing / 2 ≤ 1e−6 · scale`, within limits.
fn sample_count(length: f64, lip: f64, scale: f64, minimum: usize) -> usize {
    let needed = if scale > 0.0 {
        (length * lip / (2e-6 * scale)).ceil()
    } else {
        minimum as f64
    };
    (needed.min(MAX_SUP_SAMPLES as f64) as usize).max(minimum).max(2)
}

fn refine_periodic<F: Fn(f64) -> f64>(f: F, period: f64, lip: f64, minimum: usize) -> SupNorm {
    let coarse = (0..minimum.max(2)).map(|k| f(period * k as f64 / minimum.max(2) as f64)).fold(0.0, f64::max);
    let m = sample_count(period, lip, coarse, minimum);
    let h = period / m as f64;
    let values: Vec<f64> = (0..m).map(|k| f(h * k as f64)).collect();
    let mut best = values.iter().copied().fold(0.0, f64::max);
    for k in 0..m {
        let (prev, next) = (values[(k + m - 1) % m], values[(k + 1) % m]);
        if values[k] >= prev && values[k] >= next {
            let t = golden_max(&f, h * (k as f64 - 1.0), h * (k as f64 + 1.0));
            best = best.max(f(t));
        }
    }
    SupNorm { value: best, samples: m, density_error: lip * h / 2.0 }
}

fn refine_interval<F: Fn(f64) -> f64>(f: F, lip: f64, minimum: usize) -> SupNorm {
    let coarse = (0..minimum.max(2)).map(|k| f(k as f64 / (minimum.max(2) - 1) as f64)).fold(0.0, f64::max);
    let m = sample_count(1.0, lip, coarse, minimum);
    let h = 1.0 / (m - 1) as f64;
    let values: Vec<f64> = (0..m).map(|k| f(if k + 1 == m { 1.0 } else { h * k as f64 })).collect();
    let mut best = values.iter().copied().fold(0.0, f64::max);
    for k in 1..m - 1 {
        if values[k] >= values[k - 1] && values[k] >= values[k + 1] {
            let t = golden_max(&f, h * (k as f64 - 1.0), h * (k as f64 + 1.0));
            best = best.max(f(t));
        }
    }
    SupNorm { value: best, samples: m, density_error: lip * h / 2.0 }
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

fn bound_from(sup: f64, degree: Option<usize>, green: &GreenEvaluator, z: ComplexPoint) -> (f64, f64) {
    match degree {
        None => (0.0, 0.0),
        Some(0) => (sup, 0.0),
        Some(n) => {
            let g = green.eval_detailed(z);
            (sup * (n as f64 * g.value).exp(), g.clamp)
        }
    }
}

/// `‖p‖_K · exp(deg p · g_Ω(z, ∞))`.
pub fn bernstein_bound(p: &Polynomial1D, set: &CompactSet, z: ComplexPoint) -> Result<f64> {
    let green = green_function(set, GreenMethod::Auto)?;
    Ok(bound_from(sup_norm(p, set), p.degree(), &green, z).0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinCheck {
    pub z: ComplexPoint,
    pub abs_p: f64,
    pub bound: f64,
    pub ratio: f64,
    pub clamp: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinReport {
    pub degree: Option<usize>,
    pub sup_norm: SupNorm,
    pub green_backing: String,
    pub checks: Vec<BernsteinCheck>,
    pub violations: usize,
    pub passed: bool,
}

/// Checks `|p(z)| ≤ bound · (1 + slack)` at every test point, with
/// `slack = deg · clamp + 1e−9`. Failures are report entries.
pub fn verify_bernstein(
    p: &Polynomial1D,
    set: &CompactSet,
    test_points: &[ComplexPoint],
) -> Result<BernsteinReport> {
    let green = green_function(set, GreenMethod::Auto)?;
    let sup = sup_norm_detailed(p, set);
    let degree = p.degree();
    let checks: Vec<_> = test_points
        .iter()
        .map(|&z| {
            let (bound, clamp) = bound_from(sup.value, degree, &green, z);
            let abs_p = p.eval(z).norm();
            let slack = degree.unwrap_or(0) as f64 * clamp + 1e-9;
            let ratio = if bound > 0.0 { abs_p / bound } else { 0.0 };
            BernsteinCheck {
                z,
                abs_p,
                bound,
                ratio,
                clamp,
                slack,
                pass: abs_p <= bound * (1.0 + slack),
            }
        })
        .collect();
    let violations = checks.iter().filter(|c| !c.pass).count();
    Ok(BernsteinReport {
        degree,
        sup_norm: sup,
        green_backing: match green.backing() {
            GreenBacking::AnalyticDisk { .. } => "analytic_disk",
            GreenBacking::AnalyticSegment { .. } => "analytic_segment",
            GreenBacking::FeketePotential { .. } => "fekete_potential",
        }
        .to_string(),
        checks,
        violations,
        passed: violations == 0,
    })
}
