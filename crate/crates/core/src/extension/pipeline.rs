use std::f64::consts::LN_2;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sequence::{fit_degree_growth, tail_growth, DegreeGrowth, MultiIndex, PolynomialSequence};
use crate::capacity::{
    capacity_up_to, green_function_with, GreenEvaluator, GreenMethod, GreenOptions, DEFAULT_FEKETE_N,
    DEFAULT_POLAR_THRESHOLD, MIN_CONTINUUM_POINTS,
};
use crate::error::{Error, Result};
use crate::json::extended_f64;
use crate::set_model::{check_finite, distinct_points, CompactSet, ComplexPoint};

/// Relative slack when comparing `R(z₂) ≥ 1/i`.
const STRATUM_TOL: f64 = 1e-12;
/// Largest `log₂ p` tried by the sublevel search.
const MAX_LEVEL: u32 = 64;

/// Tuning for the certification pipeline. Every field is recorded in the certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtensionConfig {
    /// `ρ₀ = i/θ` for the selected stratum `i`; must lie in (0, 1).
    pub theta: f64,
    pub i_max: u32,
    /// Tail window for the radius profile; `None` means `max(1, N_max/2)`.
    pub window: Option<u32>,
    pub eps_cap: f64,
    pub capacity_n: usize,
    pub z2_max: f64,
    pub radial_samples: usize,
    pub angular_samples: usize,
    pub sublinear_tol: f64,
}

impl Default for ExtensionConfig {
    fn default() -> Self {
        ExtensionConfig {
            theta: 0.5,
            i_max: 1000,
            window: None,
            eps_cap: DEFAULT_POLAR_THRESHOLD,
            capacity_n: DEFAULT_FEKETE_N,
            z2_max: 1e3,
            radial_samples: 64,
            angular_samples: 64,
            sublinear_tol: 0.05,
        }
    }
}

impl ExtensionConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(what.to_string()));
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return bad("theta must lie in (0, 1)");
        }
        if self.i_max == 0 {
            return bad("i_max must be >= 1");
        }
        if !(self.eps_cap.is_finite() && self.eps_cap > 0.0) {
            return bad("eps_cap must be positive");
        }
        if self.capacity_n < MIN_CONTINUUM_POINTS {
            return bad("capacity_n must be >= 8");
        }
        if !(self.z2_max.is_finite() && self.z2_max > 0.0) {
            return bad("z2_max must be positive");
        }
        if self.radial_samples < 2 || self.angular_samples < 1 {
            return bad("gamma grid needs >= 2 radii and >= 1 angle");
        }
        if !(self.sublinear_tol.is_finite() && self.sublinear_tol > 0.0) {
            return bad("sublinear_tol must be positive");
        }
        Ok(())
    }

    fn window_for(&self, seq: &PolynomialSequence) -> u32 {
        self.window.unwrap_or((seq.max_norm() / 2).max(1))
    }

    fn green_options(&self) -> GreenOptions {
        GreenOptions {
            method: GreenMethod::Auto,
            fekete_n: self.capacity_n,
            polar_threshold: self.eps_cap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusSample {
    pub z: ComplexPoint,
    /// `+∞` when every tail coefficient vanishes at `z`.
    #[serde(with = "extended_f64")]
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusProfile {
    pub samples: Vec<RadiusSample>,
}

/// `R(z₂) = 1 / max |Pₙ(z₂)|^{1/‖n‖}` over the tail `N_max − window < ‖n‖ ≤ N_max`.
pub fn radius_profile(seq: &PolynomialSequence, samples: &[ComplexPoint], window: u32) -> Result<RadiusProfile> {
    let hi = seq.max_norm();
    if window > hi {
        return Err(Error::InvalidArgument(format!("window {window} exceeds N_max {hi}")));
    }
    let lo = hi - window;
    let tail: Vec<_> = seq
        .terms_up_to(hi)
        .into_iter()
        .filter(|(n, _)| n.norm() > lo && n.norm() > 0)
        .collect();
    if tail.is_empty() {
        return Err(Error::WindowEmpty { lo, hi });
    }
    let samples = samples
        .iter()
        .map(|&z| {
            check_finite(z)?;
            // Work with log|Pₙ|/‖n‖ so high powers cannot overflow.
            let log_root = tail
                .iter()
                .filter_map(|(n, p)| {
                    let v = p.eval(z).norm();
                    (v > 0.0).then(|| v.ln() / n.norm() as f64)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            Ok(RadiusSample { z, radius: (-log_root).exp() })
        })
        .collect::<Result<_>>()?;
    Ok(RadiusProfile { samples })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stratum {
    pub index: u32,
    pub set: CompactSet,
}

/// Smallest `i ≤ i_max` whose stratum `K_i = {R ≥ 1/i}` has capacity above `eps_cap`.
pub fn stratify_and_find_nonpolar(
    profile: &RadiusProfile,
    i_max: u32,
    eps_cap: f64,
    capacity_n: usize,
) -> Result<Stratum> {
    if profile.samples.is_empty() {
        return Err(Error::InvalidArgument("radius profile is empty".into()));
    }
    // K_i only changes at i = ⌈1/R⌉, so those are the only strata worth testing.
    let entry: Vec<(u32, ComplexPoint)> = profile
        .samples
        .iter()
        .filter_map(|s| {
            let need = ((1.0 - STRATUM_TOL) / s.radius).ceil().max(1.0);
            (need <= i_max as f64).then_some((need as u32, s.z))
        })
        .collect();
    let mut levels: Vec<u32> = entry.iter().map(|(i, _)| *i).collect();
    levels.sort_unstable();
    levels.dedup();
    for i in levels {
        let members: Vec<ComplexPoint> = entry.iter().filter(|(j, _)| *j <= i).map(|(_, z)| *z).collect();
        if distinct_points(&members).len() < MIN_CONTINUUM_POINTS {
            continue;
        }
        let set = CompactSet::cloud(members)?;
        if capacity_up_to(&set, capacity_n)?.value > eps_cap {
            return Ok(Stratum { index: i, set });
        }
    }
    Err(Error::AllStrataPolar { i_max })
}

/// The witness compact `C` with `|Pₙ| ≤ M0·ρ₁^{‖n‖}` on it.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformStratum {
    pub set: CompactSet,
    pub rho1: f64,
    pub m0: f64,
    /// `p = 2^level` in the sublevel search.
    pub level: u32,
}

/// Doubling search for the first sublevel set `{φ̂ ≤ p}` of positive capacity,
/// where `φ̂(z) = max_{‖n‖ ≤ N_max} |Pₙ(z)|·ρ₀^{−‖n‖}` on the cloud `k_i`.
pub fn uniform_bound_compact(
    seq: &PolynomialSequence,
    k_i: &CompactSet,
    rho0: f64,
    eps_cap: f64,
    capacity_n: usize,
) -> Result<UniformStratum> {
    if !(rho0.is_finite() && rho0 > 0.0) {
        return Err(Error::InvalidArgument(format!("rho0 = {rho0} must be positive")));
    }
    let terms = seq.terms_up_to(seq.max_norm());
    let points = distinct_points(&k_i.samples());
    let log_phi: Vec<f64> = points
        .iter()
        .map(|&z| {
            terms
                .iter()
                .filter_map(|(n, p)| {
                    let v = p.eval(z).norm();
                    (v > 0.0).then(|| v.ln() - n.norm() as f64 * rho0.ln())
                })
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();

    let mut last_size = 0;
    for level in 0..=MAX_LEVEL {
        let cut = level as f64 * LN_2 + STRATUM_TOL;
        let members: Vec<ComplexPoint> = points
            .iter()
            .zip(&log_phi)
            .filter(|(_, l)| **l <= cut)
            .map(|(z, _)| *z)
            .collect();
        if members.len() == last_size || members.len() < MIN_CONTINUUM_POINTS {
            continue;
        }
        last_size = members.len();
        let set = CompactSet::cloud(members.clone())?;
        if capacity_up_to(&set, capacity_n)?.value <= eps_cap {
            continue;
        }
        let mut log_rho1 = f64::NEG_INFINITY;
        let mut m0: f64 = 1.0;
        for (n, p) in &terms {
            for &z in &members {
                let v = p.eval(z).norm();
                if n.norm() == 0 {
                    m0 = m0.max(v);
                } else if v > 0.0 {
                    log_rho1 = log_rho1.max(v.ln() / n.norm() as f64);
                }
            }
        }
        let rho1 = if log_rho1.is_finite() { log_rho1.exp() } else { 1.0 };
        return Ok(UniformStratum { set, rho1, m0, level });
    }
    Err(Error::NoUniformStratum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Domain `|z₁| < C2/(1+|z₂|)^{C1}`.
    Linear,
    /// Domain `|z₁| < C2` for `|z₂| ≤ z2_max`.
    Uniform,
}

/// Certified domain of convergence, with everything needed to evaluate inside it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionCertificate {
    pub variant: Variant,
    pub k: usize,
    pub rho0: f64,
    pub rho1: f64,
    #[serde(rename = "M0")]
    pub m0: f64,
    #[serde(rename = "C0")]
    pub c0: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "gammaC")]
    pub gamma_c: f64,
    /// Added to `g` off the witness to cover the discretization error of the
    /// Green function: `max(ln(d_n/cap), |ln(d_{n/2}/d_n)|)` of the witness estimate.
    pub green_margin: f64,
    /// `max g` over `|z₂| ≤ z2_max`; used by the uniform variant.
    pub green_max: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub exponent: f64,
    /// Set when the exponent is not 1, so the domain shape differs from `C2/(1+|z₂|)`.
    pub exponent_differs_from_one: bool,
    /// Largest `|z₂|` the domain is claimed for (`None` means all of ℂ).
    pub z2_limit: Option<f64>,
    pub stratum_index: u32,
    pub sublevel_exponent: u32,
    /// Tail start of the residual slope test (uniform variant only).
    pub tail_start: Option<u32>,
    pub witness: CompactSet,
    pub witness_capacity: f64,
    pub robin_constant: f64,
    #[serde(rename = "N_used")]
    pub n_used: u32,
    pub window: u32,
    pub thresholds: ExtensionConfig,
    pub tool_version: String,
    #[serde(skip)]
    green: OnceLock<GreenEvaluator>,
}

impl PartialEq for ExtensionCertificate {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_value(self).ok() == serde_json::to_value(other).ok()
    }
}

impl ExtensionCertificate {
    /// Green function of the witness complement, rebuilt from the stored witness.
    pub fn green(&self) -> Result<&GreenEvaluator> {
        if let Some(g) = self.green.get() {
            return Ok(g);
        }
        let g = green_function_with(&self.witness, &self.thresholds.green_options())?;
        Ok(self.green.get_or_init(|| g))
    }

    /// Certified radius in `z₁` at `z₂`; zero beyond `z2_limit`.
    pub fn radius_at(&self, z2_abs: f64) -> f64 {
        match self.z2_limit {
            Some(lim) if z2_abs > lim => 0.0,
            _ => self.c2 / (1.0 + z2_abs).powf(self.exponent),
        }
    }

    /// `g(z₂)` plus the margin wherever `g > 0`; every bound uses this value.
    pub fn safe_green(&self, z2: ComplexPoint) -> Result<f64> {
        Ok(with_margin(self.green()?.eval(z2), self.green_margin))
    }

    /// `q(z₁, z₂) = ρ₁·e^{C1·g(z₂)}·‖z₁‖_∞`.
    pub fn ratio(&self, z1: &[ComplexPoint], z2: ComplexPoint) -> Result<f64> {
        let r1 = z1.iter().map(|w| w.norm()).fold(0.0, f64::max);
        Ok(self.rho1 * (self.c1 * self.safe_green(z2)?).exp() * r1)
    }
}

/// `M0·ρ₁^{‖n‖}·exp((C0 + C1‖n‖)·g(z₂))`.
pub fn global_bound(cert: &ExtensionCertificate, z2: ComplexPoint, n: &MultiIndex) -> Result<f64> {
    let g = cert.safe_green(z2)?;
    let norm = n.norm() as f64;
    Ok(cert.m0 * cert.rho1.powf(norm) * ((cert.c0 + cert.c1 * norm) * g).exp())
}

/// Evaluation grid for `γ_C`: `|z₂| = 0` and log-spaced radii up to `z2_max`.
fn gamma_grid(cfg: &ExtensionConfig) -> Vec<ComplexPoint> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    let steps = cfg.radial_samples - 1;
    let (lo, hi) = (1e-2f64.min(cfg.z2_max).ln(), cfg.z2_max.ln());
    for j in 0..steps {
        let t = if steps == 1 { 1.0 } else { j as f64 / (steps - 1) as f64 };
        let r = (lo + t * (hi - lo)).exp();
        for a in 0..cfg.angular_samples {
            let theta = std::f64::consts::TAU * a as f64 / cfg.angular_samples as f64;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    out
}

fn with_margin(g: f64, margin: f64) -> f64 {
    if g > 0.0 {
        g + margin
    } else {
        0.0
    }
}

fn staged<T>(r: Result<T>, stage: &'static str) -> Result<T> {
    r.map_err(|e| e.in_stage(stage))
}

/// Full pipeline: degree fit, radius profile, stratum, witness compact, Green function.
pub fn certify_extension(
    seq: &PolynomialSequence,
    k_samples: &[ComplexPoint],
    cfg: &ExtensionConfig,
) -> Result<ExtensionCertificate> {
    cfg.validate()?;
    let growth = staged(fit_degree_growth(seq), "fit_degree_growth")?;
    build(seq, k_samples, cfg, growth, Variant::Linear, None)
}

/// Variant for sublinear degree growth: a domain of constant radius in `z₁`.
///
/// The residual slope `ε` beyond the tail start `N_max/2` must fall below
/// `sublinear_tol` and must not exceed the slope beyond `N_max/4`.
pub fn certify_uniform(
    seq: &PolynomialSequence,
    k_samples: &[ComplexPoint],
    cfg: &ExtensionConfig,
) -> Result<ExtensionCertificate> {
    cfg.validate()?;
    staged(fit_degree_growth(seq), "fit_degree_growth")?;
    let n = seq.max_norm();
    let (early, late) = ((n / 4).max(1), (n / 2).max(1));
    let wide = tail_growth(seq, early);
    let narrow = tail_growth(seq, late);
    if !(narrow.c1 < cfg.sublinear_tol && narrow.c1 <= wide.c1 + 1e-12) {
        return Err(Error::NotSublinear {
            slope: narrow.c1,
            tolerance: cfg.sublinear_tol,
        }
        .in_stage("sublinear_test"));
    }
    build(seq, k_samples, cfg, narrow, Variant::Uniform, Some(late))
}

fn build(
    seq: &PolynomialSequence,
    k_samples: &[ComplexPoint],
    cfg: &ExtensionConfig,
    growth: DegreeGrowth,
    variant: Variant,
    tail_start: Option<u32>,
) -> Result<ExtensionCertificate> {
    if k_samples.is_empty() {
        return Err(Error::EmptyPointCloud.in_stage("radius_profile"));
    }
    let window = cfg.window_for(seq);
    let profile = staged(radius_profile(seq, k_samples, window), "radius_profile")?;
    let stratum = staged(
        stratify_and_find_nonpolar(&profile, cfg.i_max, cfg.eps_cap, cfg.capacity_n),
        "stratify",
    )?;
    let rho0 = stratum.index as f64 / cfg.theta;
    let witness = staged(
        uniform_bound_compact(seq, &stratum.set, rho0, cfg.eps_cap, cfg.capacity_n),
        "uniform_bound_compact",
    )?;
    let green = staged(green_function_with(&witness.set, &cfg.green_options()), "green")?;

    let estimate = staged(capacity_up_to(&witness.set, cfg.capacity_n), "green")?;
    let half = estimate
        .diameter_sequence
        .iter()
        .find(|(k, _)| *k == estimate.n_used / 2)
        .map_or(0.0, |(_, d)| (d / estimate.transfinite_diameter).ln().abs());
    let margin = (estimate.transfinite_diameter / estimate.value).ln().max(half);

    let grid = gamma_grid(cfg);
    let robin = green.robin_constant();
    let safe = |z: ComplexPoint| with_margin(green.eval(z), margin);
    let gamma_c = grid
        .iter()
        .map(|&z| safe(z) - (1.0 + z.norm()).ln())
        .fold(robin + margin, f64::max);
    let green_max = grid.iter().map(|&z| safe(z)).fold(0.0, f64::max);

    let (c2, exponent, z2_limit) = match variant {
        Variant::Linear => (1.0 / (witness.rho1 * (growth.c1 * gamma_c).exp()), growth.c1, None),
        Variant::Uniform => (
            1.0 / (witness.rho1 * (growth.c1 * green_max).exp()),
            0.0,
            Some(cfg.z2_max),
        ),
    };
    let cert = ExtensionCertificate {
        variant,
        k: seq.k(),
        rho0,
        rho1: witness.rho1,
        m0: witness.m0,
        c0: growth.c0,
        c1: growth.c1,
        gamma_c,
        green_margin: margin,
        green_max,
        c2,
        exponent,
        exponent_differs_from_one: exponent != 1.0,
        z2_limit,
        stratum_index: stratum.index,
        sublevel_exponent: witness.level,
        tail_start,
        witness_capacity: green.capacity(),
        robin_constant: robin,
        witness: witness.set,
        n_used: seq.max_norm(),
        window,
        thresholds: cfg.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        green: OnceLock::new(),
    };
    let _ = cert.green.set(green);
    Ok(cert)
}
