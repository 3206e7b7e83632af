use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::pipeline::ExtensionCertificate;
use super::sequence::{MultiIndex, PolynomialSequence};
use crate::error::{Error, Result};
use crate::set_model::{check_finite, ComplexPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: Complex64,
    /// Certified bound on `|f − partial sum|`.
    pub tail_bound: f64,
    /// Partial sums run over `‖n‖ ≤ terms_used`.
    pub terms_used: u32,
    /// Geometric ratio `q(z₁, z₂)`.
    pub q: f64,
}

/// Bound on `Σ_{‖n‖ > n} |Pₙ(z₂) z₁ⁿ|`.
///
/// There are `C(j+k−1, k−1)` indices of norm `j`, each term bounded by
/// `A·qʲ` with `A = M0·e^{C0·g}`. Successive norms grow by the factor
/// `q·(j+k)/(j+1)`, which is largest at the first omitted norm, so the tail
/// is dominated by a geometric series with ratio `q·(n+1+k)/(n+2)`.
fn tail_after(a: f64, q: f64, k: usize, n: u32) -> f64 {
    let ratio = q * (n as f64 + 1.0 + k as f64) / (n as f64 + 2.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    a * MultiIndex::count_with_norm(k, n + 1) * q.powi(n as i32 + 1) / (1.0 - ratio)
}

/// Partial sum of `f(z₁, z₂)` with a certified tail below `tol`.
pub fn evaluate(
    cert: &ExtensionCertificate,
    seq: &PolynomialSequence,
    z1: &[ComplexPoint],
    z2: ComplexPoint,
    tol: f64,
) -> Result<Evaluation> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol = {tol} must be positive")));
    }
    if z1.len() != seq.k() || seq.k() != cert.k {
        return Err(Error::InvalidArgument(format!(
            "z1 has {} coordinates; sequence expects {} and certificate {}",
            z1.len(),
            seq.k(),
            cert.k
        )));
    }
    for &w in z1.iter().chain([&z2]) {
        check_finite(w)?;
    }
    let q = cert.ratio(z1, z2)?;
    if q.is_nan() || q >= 1.0 {
        return Err(Error::OutsideCertifiedDomain { q });
    }
    if z1.iter().all(|w| *w == Complex64::new(0.0, 0.0)) {
        return Ok(Evaluation {
            value: seq.partial_sum(z1, z2, 0),
            tail_bound: 0.0,
            terms_used: 0,
            q,
        });
    }
    let g = cert.safe_green(z2)?;
    let a = cert.m0 * (cert.c0 * g).exp();
    let n_max = seq.max_norm();
    let terms = (0..=n_max)
        .find(|&n| tail_after(a, q, seq.k(), n) <= tol)
        .ok_or_else(|| Error::InsufficientData {
            n_max,
            achievable: tail_after(a, q, seq.k(), n_max),
        })?;
    Ok(Evaluation {
        value: seq.partial_sum(z1, z2, terms),
        tail_bound: tail_after(a, q, seq.k(), terms),
        terms_used: terms,
        q,
    })
}
