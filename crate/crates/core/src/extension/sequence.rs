use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bernstein::Polynomial1D;
use crate::error::{Error, Result};

/// Multi-index `n ∈ ℕᵏ` with `‖n‖ = Σ nⱼ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("multi-index needs k >= 1".into()));
        }
        Ok(MultiIndex(entries))
    }

    pub fn single(n: u32) -> Self {
        MultiIndex(vec![n])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `z₁ⁿ = ∏ z₁ⱼ^{nⱼ}`.
    pub fn power(&self, z: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(z)
            .map(|(&e, w)| w.powu(e))
            .product()
    }

    /// All multi-indices in ℕᵏ of norm exactly `norm`, in lexicographic order.
    pub fn with_norm(k: usize, norm: u32) -> Vec<MultiIndex> {
        fn go(k: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if k == 1 {
                prefix.push(remaining);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=remaining).rev() {
                prefix.push(first);
                go(k - 1, remaining - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(k, norm, &mut Vec::with_capacity(k), &mut out);
        out
    }

    /// Number of multi-indices in ℕᵏ of norm exactly `norm`: C(norm + k − 1, k − 1).
    pub fn count_with_norm(k: usize, norm: u32) -> f64 {
        (1..k).fold(1.0, |acc, j| acc * (norm as f64 + j as f64) / j as f64)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

type Provider = Arc<dyn Fn(&MultiIndex) -> Polynomial1D + Send + Sync>;

/// The coefficient polynomials `(Pₙ)` available up to `‖n‖ ≤ max_norm`.
#[derive(Clone)]
pub struct PolynomialSequence {
    k: usize,
    max_norm: u32,
    declared_c0: Option<f64>,
    declared_c1: Option<f64>,
    provider: Provider,
}

impl fmt::Debug for PolynomialSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolynomialSequence")
            .field("k", &self.k)
            .field("max_norm", &self.max_norm)
            .field("declared_c0", &self.declared_c0)
            .field("declared_c1", &self.declared_c1)
            .finish_non_exhaustive()
    }
}

impl PolynomialSequence {
    pub fn from_fn<F>(k: usize, max_norm: u32, provider: F) -> Result<Self>
    where
        F: Fn(&MultiIndex) -> Polynomial1D + Send + Sync + 'static,
    {
        if k == 0 {
            return Err(Error::InvalidArgument("sequence needs k >= 1".into()));
        }
        Ok(PolynomialSequence {
            k,
            max_norm,
            declared_c0: None,
            declared_c1: None,
            provider: Arc::new(provider),
        })
    }

    /// `Pₙ(z) = (λz)ⁿ`, the coefficients of `1/(1 − λ z₁ z₂)`.
    pub fn geometric(lambda: Complex64, max_norm: u32) -> Self {
        Self::from_fn(1, max_norm, move |n| Polynomial1D::monomial(n.norm() as usize, lambda.powu(n.norm())))
            .expect("k = 1")
    }

    /// `Pₙ = c` for every `n`.
    pub fn constant(c: Complex64, max_norm: u32) -> Self {
        Self::from_fn(1, max_norm, move |_| Polynomial1D::constant(c)).expect("k = 1")
    }

    /// `Pₙ(z) = 1 + z + … + z^{⌊√n⌋}`: degrees grow sublinearly.
    pub fn sqrt_degree(max_norm: u32) -> Self {
        Self::from_fn(1, max_norm, |n| {
            let d = (n.norm() as f64).sqrt().floor() as usize;
            Polynomial1D::from_real(&vec![1.0; d + 1])
        })
        .expect("k = 1")
    }

    /// The ring identity: `P₀ = 1`, every other term zero.
    pub fn one(k: usize, max_norm: u32) -> Result<Self> {
        Self::from_fn(k, max_norm, |n| {
            if n.norm() == 0 {
                Polynomial1D::constant(Complex64::new(1.0, 0.0))
            } else {
                Polynomial1D::zero()
            }
        })
    }

    /// Explicit table; indices missing from the table are zero.
    pub fn table(k: usize, max_norm: u32, terms: BTreeMap<MultiIndex, Polynomial1D>) -> Result<Self> {
        if let Some(bad) = terms.keys().find(|n| n.k() != k) {
            return Err(Error::InvalidArgument(format!("index {bad} does not have {k} entries")));
        }
        Self::from_fn(k, max_norm, move |n| terms.get(n).cloned().unwrap_or_else(Polynomial1D::zero))
    }

    pub fn with_declared(mut self, c0: Option<f64>, c1: Option<f64>) -> Result<Self> {
        for v in [c0, c1].into_iter().flatten() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidArgument(format!("declared growth constant {v} must be >= 0")));
            }
        }
        self.declared_c0 = c0;
        self.declared_c1 = c1;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_norm(&self) -> u32 {
        self.max_norm
    }

    pub fn declared(&self) -> (Option<f64>, Option<f64>) {
        (self.declared_c0, self.declared_c1)
    }

    pub fn term(&self, n: &MultiIndex) -> Polynomial1D {
        (self.provider)(n)
    }

    /// All available `(n, Pₙ)` with `‖n‖ ≤ max`, ordered by norm.
    pub fn terms_up_to(&self, max: u32) -> Vec<(MultiIndex, Polynomial1D)> {
        (0..=max.min(self.max_norm))
            .flat_map(|norm| MultiIndex::with_norm(self.k, norm))
            .map(|n| {
                let p = self.term(&n);
                (n, p)
            })
            .collect()
    }

    /// Σ_{‖n‖ ≤ max} Pₙ(z₂) z₁ⁿ.
    pub fn partial_sum(&self, z1: &[Complex64], z2: Complex64, max: u32) -> Complex64 {
        self.terms_up_to(max)
            .iter()
            .map(|(n, p)| p.eval(z2) * n.power(z1))
            .sum()
    }

    /// `(‖n‖, deg Pₙ)` for every available nonzero term.
    pub(crate) fn degrees(&self) -> Vec<(MultiIndex, u32, usize)> {
        self.terms_up_to(self.max_norm)
            .into_iter()
            .filter_map(|(n, p)| p.degree().map(|d| (n.clone(), n.norm(), d)))
            .collect()
    }
}

/// Linear degree envelope `deg Pₙ ≤ c0 + c1 · ‖n‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeGrowth {
    pub c0: f64,
    pub c1: f64,
}

const GROWTH_TOL: f64 = 1e-9;

fn validate_growth(degrees: &[(MultiIndex, u32, usize)], c0: f64, c1: f64) -> Result<()> {
    for (n, norm, d) in degrees {
        if *d as f64 > c0 + c1 * *norm as f64 + GROWTH_TOL {
            return Err(Error::DegreeGrowthViolated {
                index: n.entries().to_vec(),
                degree: *d,
                norm: *norm,
                c0,
                c1,
            });
        }
    }
    Ok(())
}

/// Degree-growth constants for the available data.
///
/// Declared constants are validated and returned. Otherwise `c0` is the least
/// intercept the data allows (`deg P₀`, or 0 when `P₀ = 0`) and `c1` the least
/// slope given that intercept. With only `c0` declared the slope is fitted to
/// it; with only `c1` declared the intercept is.
pub fn fit_degree_growth(seq: &PolynomialSequence) -> Result<DegreeGrowth> {
    let available = (0..=seq.max_norm)
        .map(|norm| MultiIndex::count_with_norm(seq.k, norm))
        .sum::<f64>();
    if available < 2.0 {
        return Err(Error::InvalidArgument("degree fit needs at least 2 indices".into()));
    }
    let degrees = seq.degrees();
    let (c0, c1) = match seq.declared() {
        (Some(c0), Some(c1)) => (c0, c1),
        (Some(c0), None) => (c0, slope_for(&degrees, c0)),
        (None, Some(c1)) => (
            degrees
                .iter()
                .map(|(_, norm, d)| *d as f64 - c1 * *norm as f64)
                .fold(0.0, f64::max),
            c1,
        ),
        (None, None) => {
            let c0 = degrees
                .iter()
                .filter(|(_, norm, _)| *norm == 0)
                .map(|(_, _, d)| *d as f64)
                .fold(0.0, f64::max);
            (c0, slope_for(&degrees, c0))
        }
    };
    validate_growth(&degrees, c0, c1)?;
    Ok(DegreeGrowth { c0, c1 })
}

fn slope_for(degrees: &[(MultiIndex, u32, usize)], c0: f64) -> f64 {
    degrees
        .iter()
        .filter(|(_, norm, _)| *norm > 0)
        .map(|(_, norm, d)| (*d as f64 - c0) / *norm as f64)
        .fold(0.0, f64::max)
}

/// Residual slope after spending the degree budget of the first `start` norms:
/// `D = max_{‖n‖ < start} deg Pₙ` and `ε = max_{‖n‖ ≥ start} (deg Pₙ − D)/‖n‖`,
/// so that `deg Pₙ ≤ D + ε‖n‖` for every available `n`.
pub fn tail_growth(seq: &PolynomialSequence, start: u32) -> DegreeGrowth {
    let degrees = seq.degrees();
    let c0 = degrees
        .iter()
        .filter(|(_, norm, _)| *norm < start)
        .map(|(_, _, d)| *d as f64)
        .fold(0.0, f64::max);
    let c1 = degrees
        .iter()
        .filter(|(_, norm, _)| *norm >= start && *norm > 0)
        .map(|(_, norm, d)| (*d as f64 - c0) / *norm as f64)
        .fold(0.0, f64::max);
    DegreeGrowth { c0, c1 }
}

/// Truncated Cauchy product `(fg)ₙ = Σ_{a+b=n} P_a Q_b` for `‖n‖ ≤ max_norm`.
pub fn ring_multiply(f: &PolynomialSequence, g: &PolynomialSequence, max_norm: u32) -> Result<PolynomialSequence> {
    if f.k != g.k {
        return Err(Error::InvalidArgument(format!("factor dimensions differ: {} vs {}", f.k, g.k)));
    }
    if f.max_norm < max_norm || g.max_norm < max_norm {
        return Err(Error::InvalidArgument(format!(
            "product to norm {max_norm} needs both factors up to it (have {} and {})",
            f.max_norm, g.max_norm
        )));
    }
    let fs: BTreeMap<_, _> = f.terms_up_to(max_norm).into_iter().collect();
    let gs: BTreeMap<_, _> = g.terms_up_to(max_norm).into_iter().collect();
    let mut out = BTreeMap::new();
    for norm in 0..=max_norm {
        for n in MultiIndex::with_norm(f.k, norm) {
            let mut acc = Polynomial1D::zero();
            for (a, pa) in fs.range(..).filter(|(a, _)| dominated(a, &n)) {
                if pa.is_zero() {
                    continue;
                }
                let b = MultiIndex(n.0.iter().zip(&a.0).map(|(x, y)| x - y).collect());
                acc = acc.add(&pa.mul(&gs[&b]));
            }
            out.insert(n, acc);
        }
    }
    PolynomialSequence::table(f.k, max_norm, out)
}

fn dominated(a: &MultiIndex, n: &MultiIndex) -> bool {
    a.0.iter().zip(&n.0).all(|(x, y)| x <= y)
}

/// JSON description of a sequence: a builtin family or an explicit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_c0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_c1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Geometric { lambda: Complex64, n_max: u32 },
    Constant { c: Complex64, n_max: u32 },
    SqrtDegree { n_max: u32 },
    Table { k: usize, n_max: u32, terms: Vec<TableTerm> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableTerm {
    pub index: Vec<u32>,
    pub coefficients: Vec<Complex64>,
}

impl SequenceSpec {
    pub fn build(&self) -> Result<PolynomialSequence> {
        let seq = match &self.family {
            Family::Geometric { lambda, n_max } => PolynomialSequence::geometric(*lambda, *n_max),
            Family::Constant { c, n_max } => PolynomialSequence::constant(*c, *n_max),
            Family::SqrtDegree { n_max } => PolynomialSequence::sqrt_degree(*n_max),
            Family::Table { k, n_max, terms } => {
                let mut map = BTreeMap::new();
                for t in terms {
                    let idx = MultiIndex::new(t.index.clone())?;
                    if idx.norm() > *n_max {
                        return Err(Error::InvalidArgument(format!("index {idx} exceeds n_max {n_max}")));
                    }
                    for c in &t.coefficients {
                        crate::set_model::check_finite(*c)?;
                    }
                    if map.insert(idx.clone(), Polynomial1D::new(t.coefficients.clone())).is_some() {
                        return Err(Error::InvalidArgument(format!("index {idx} listed twice")));
                    }
                }
                PolynomialSequence::table(*k, *n_max, map)?
            }
        };
        seq.with_declared(self.declared_c0, self.declared_c1)
    }
}
