//! Certified extension of `f(z₁, z₂) = Σ Pₙ(z₂) z₁ⁿ`.
//!
//! From finitely many coefficient polynomials and samples of a set `K` on
//! which the series converges, the pipeline finds a stratum of `K` with
//! positive capacity, a witness compact where `|Pₙ| ≤ M0·ρ₁^{‖n‖}`, and uses
//! the Green function of its complement to certify convergence on
//! `|z₁| < C2/(1+|z₂|)^{C1}`. Claims are conditional on the available data:
//! every limsup is replaced by a maximum over the indices up to `N_max`.

mod evaluate;
mod pipeline;
mod sequence;

pub use evaluate::{evaluate, Evaluation};
pub use pipeline::{
    certify_extension, certify_uniform, global_bound, radius_profile, stratify_and_find_nonpolar,
    uniform_bound_compact, ExtensionCertificate, ExtensionConfig, RadiusProfile, RadiusSample, Stratum,
    UniformStratum, Variant,
};
pub use sequence::{
    fit_degree_growth, ring_multiply, tail_growth, DegreeGrowth, Family, MultiIndex, PolynomialSequence,
    SequenceSpec, TableTerm,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::Polynomial1D;
    use crate::error::Error;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle(n: usize, r: f64) -> Vec<Complex64> {
        (0..n)
            .map(|j| Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n as f64))
            .collect()
    }

    fn geometric_cert(lambda: Complex64) -> (PolynomialSequence, ExtensionCertificate) {
        let seq = PolynomialSequence::geometric(lambda, 60);
        let cert = certify_extension(&seq, &circle(200, 1.0), &ExtensionConfig::default()).unwrap();
        (seq, cert)
    }

    fn unit_geometric() -> &'static (PolynomialSequence, ExtensionCertificate) {
        static CERT: OnceLock<(PolynomialSequence, ExtensionCertificate)> = OnceLock::new();
        CERT.get_or_init(|| geometric_cert(c(1.0, 0.0)))
    }

    #[test]
    fn radius_examples() {
        let geo = PolynomialSequence::geometric(c(1.0, 0.0), 60);
        let p = radius_profile(&geo, &[c(2.0, 0.0), c(0.0, 0.0)], 30).unwrap();
        assert!((p.samples[0].radius - 0.5).abs() < 1e-12);
        assert_eq!(p.samples[1].radius, f64::INFINITY);
        let one = PolynomialSequence::constant(c(1.0, 0.0), 60);
        let p = radius_profile(&one, &[c(0.3, -4.0)], 30).unwrap();
        assert_eq!(p.samples[0].radius, 1.0);
        assert!(matches!(radius_profile(&one, &[c(0.0, 0.0)], 0), Err(Error::WindowEmpty { lo: 60, hi: 60 })));
        assert!(radius_profile(&one, &[c(0.0, 0.0)], 61).is_err());
    }

    fn profile(points: Vec<(Complex64, f64)>) -> RadiusProfile {
        RadiusProfile {
            samples: points.into_iter().map(|(z, radius)| RadiusSample { z, radius }).collect(),
        }
    }

    #[test]
    fn stratum_examples() {
        let half = profile(circle(200, 1.0).into_iter().map(|z| (z, 0.5)).collect());
        let s = stratify_and_find_nonpolar(&half, 1000, 1e-4, 128).unwrap();
        assert_eq!(s.index, 2);
        assert_eq!(s.set.samples().len(), 200);
        let inf = profile(circle(50, 1.0).into_iter().map(|z| (z, f64::INFINITY)).collect());
        assert_eq!(stratify_and_find_nonpolar(&inf, 1000, 1e-4, 128).unwrap().index, 1);

        let mut pts: Vec<_> = circle(200, 1.0).into_iter().map(|z| (z, 1e-9)).collect();
        pts[0].1 = 1.0;
        assert!(matches!(
            stratify_and_find_nonpolar(&profile(pts), 100, 1e-4, 128),
            Err(Error::AllStrataPolar { i_max: 100 })
        ));
    }

    #[test]
    fn witness_examples() {
        let k = crate::CompactSet::cloud(circle(200, 1.0)).unwrap();
        let geo = PolynomialSequence::geometric(c(1.0, 0.0), 60);
        let w = uniform_bound_compact(&geo, &k, 0.5, 1e-4, 128).unwrap();
        assert_eq!(w.set.samples().len(), 200);
        assert!((w.rho1 - 1.0).abs() < 1e-12);
        assert_eq!(w.m0, 1.0);

        let geo2 = PolynomialSequence::geometric(c(2.0, 0.0), 60);
        let w = uniform_bound_compact(&geo2, &k, 4.0, 1e-4, 128).unwrap();
        assert!((w.rho1 - 2.0).abs() < 1e-12);
        assert_eq!(w.m0, 1.0);

        let seven = PolynomialSequence::from_fn(1, 10, |n| {
            if n.norm() == 0 {
                Polynomial1D::constant(c(7.0, 0.0))
            } else {
                Polynomial1D::zero()
            }
        })
        .unwrap();
        let w = uniform_bound_compact(&seven, &k, 2.0, 1e-4, 128).unwrap();
        assert_eq!((w.set.samples().len(), w.rho1, w.m0), (200, 1.0, 7.0));
        assert_eq!(w.level, 3);
    }

    #[test]
    fn geometric_certificate() {
        let (seq, cert) = unit_geometric();
        assert_eq!((cert.c0, cert.c1, cert.exponent), (0.0, 1.0, 1.0));
        assert!(!cert.exponent_differs_from_one);
        assert!((cert.rho1 - 1.0).abs() < 1e-12);
        assert!(cert.c2 >= 0.5, "C2 = {}", cert.c2);
        assert_eq!(cert.stratum_index, 1);
        assert_eq!(cert.n_used, 60);
        assert!((cert.c2 - 1.0 / (cert.rho1 * (cert.c1 * cert.gamma_c).exp())).abs() == 0.0);
        // |Pₙ| ≤ M0·ρ₁^{‖n‖} on every witness sample.
        for z in cert.witness.samples() {
            for (n, p) in seq.terms_up_to(60) {
                assert!(p.eval(z).norm() <= cert.m0 * cert.rho1.powi(n.norm() as i32) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn global_bound_examples() {
        let (seq, cert) = unit_geometric();
        let b = global_bound(cert, c(2.0, 0.0), &MultiIndex::single(5)).unwrap();
        // Equality for the continuum circle; the cloud witness adds a small margin.
        let p5 = seq.term(&MultiIndex::single(5)).eval(c(2.0, 0.0)).norm();
        assert_eq!(p5, 32.0);
        assert!(b >= p5 && b <= 32.0 * (5.0 * cert.green_margin).exp() * 1.01, "bound {b}");
        assert!(cert.green_margin > 0.0 && cert.green_margin < 0.05);
        for z in cert.witness.samples().into_iter().step_by(17) {
            for n in 0..=60 {
                let b = global_bound(cert, z, &MultiIndex::single(n)).unwrap();
                assert_eq!(b, cert.m0 * cert.rho1.powf(n as f64));
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let (seq, cert) = unit_geometric();
        let e = evaluate(cert, seq, &[c(0.1, 0.0)], c(2.0, 0.0), 1e-10).unwrap();
        assert!((e.value - c(1.25, 0.0)).norm() < 1e-10);
        assert!(e.tail_bound <= 1e-10);
        let zero = evaluate(cert, seq, &[c(0.0, 0.0)], c(2.0, 0.0), 1e-10).unwrap();
        assert_eq!((zero.value, zero.tail_bound, zero.terms_used), (c(1.0, 0.0), 0.0, 0));
        assert!(matches!(
            evaluate(cert, seq, &[c(0.9, 0.0)], c(2.0, 0.0), 1e-10),
            Err(Error::OutsideCertifiedDomain { .. })
        ));
        assert!(matches!(
            evaluate(cert, seq, &[c(0.45, 0.0)], c(2.0, 0.0), 1e-15),
            Err(Error::InsufficientData { n_max: 60, .. })
        ));
    }

    #[test]
    fn constant_sequence_on_segment() {
        let seq = PolynomialSequence::constant(c(1.0, 0.0), 40);
        let seg: Vec<_> = (0..100).map(|j| c(-1.0 + 2.0 * j as f64 / 99.0, 0.0)).collect();
        let cert = certify_extension(&seq, &seg, &ExtensionConfig::default()).unwrap();
        assert_eq!((cert.c1, cert.exponent), (0.0, 0.0));
        assert!(cert.exponent_differs_from_one);
        assert!((cert.c2 - 1.0).abs() < 1e-12);
        let uni = certify_uniform(&seq, &seg, &ExtensionConfig::default()).unwrap();
        assert!((uni.c2 - 1.0 / uni.rho1).abs() < 1e-15);
    }

    #[test]
    fn single_point_is_all_polar() {
        let seq = PolynomialSequence::geometric(c(1.0, 0.0), 20);
        let err = certify_extension(&seq, &[c(0.5, 0.0)], &ExtensionConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Stage { stage: "stratify", .. }));
        assert!(matches!(err.root(), Error::AllStrataPolar { .. }));
    }

    #[test]
    fn uniform_variant() {
        let sq = PolynomialSequence::sqrt_degree(400);
        let cert = certify_uniform(&sq, &circle(200, 1.0), &ExtensionConfig::default()).unwrap();
        assert_eq!(cert.exponent, 0.0);
        assert_eq!(cert.variant, Variant::Uniform);
        assert!(cert.c1 < 0.05);
        let geo = PolynomialSequence::geometric(c(1.0, 0.0), 60);
        let err = certify_uniform(&geo, &circle(200, 1.0), &ExtensionConfig::default()).unwrap_err();
        assert!(matches!(err.root(), Error::NotSublinear { .. }));
    }

    #[test]
    fn uniform_evaluation_matches_direct_sum() {
        let sq = PolynomialSequence::sqrt_degree(400);
        let cert = certify_uniform(&sq, &circle(200, 1.0), &ExtensionConfig::default()).unwrap();
        let z2 = c(0.3, 0.4);
        let z1 = [c(0.25 * cert.c2, 0.0)];
        let e = evaluate(&cert, &sq, &z1, z2, 1e-9).unwrap();
        let full = sq.partial_sum(&z1, z2, 400);
        assert!((e.value - full).norm() <= e.tail_bound + 1e-12);
    }

    #[test]
    fn two_variable_series() {
        // Pₙ = z₂^{‖n‖} for n ∈ ℕ² sums to 1/((1 − a z₂)(1 − b z₂)).
        let seq = PolynomialSequence::from_fn(2, 40, |n| Polynomial1D::monomial(n.norm() as usize, c(1.0, 0.0))).unwrap();
        let cert = certify_extension(&seq, &circle(200, 1.0), &ExtensionConfig::default()).unwrap();
        let (a, b, z2) = (c(0.1, 0.05), c(-0.08, 0.0), c(1.5, 0.5));
        let e = evaluate(&cert, &seq, &[a, b], z2, 1e-9).unwrap();
        let exact = 1.0 / ((1.0 - a * z2) * (1.0 - b * z2));
        assert!((e.value - exact).norm() < 1e-8, "{} vs {}", e.value, exact);
    }

    #[test]
    fn certificate_json_round_trip() {
        let (seq, cert) = unit_geometric();
        let text = serde_json::to_string(cert).unwrap();
        for key in ["\"rho0\"", "\"M0\"", "\"C0\"", "\"C1\"", "\"gammaC\"", "\"C2\"", "\"N_used\"", "\"witness\""] {
            assert!(text.contains(key), "{key}");
        }
        let back: ExtensionCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, cert);
        let e1 = evaluate(cert, seq, &[c(0.2, 0.1)], c(-1.0, 1.0), 1e-9).unwrap();
        let e2 = evaluate(&back, seq, &[c(0.2, 0.1)], c(-1.0, 1.0), 1e-9).unwrap();
        assert_eq!(e1, e2);
    }

    #[test]
    fn more_samples_do_not_shrink_the_domain() {
        let seq = PolynomialSequence::geometric(c(1.0, 0.0), 60);
        let cfg = ExtensionConfig::default();
        let small = certify_extension(&seq, &circle(100, 1.0), &cfg).unwrap();
        let large = certify_extension(&seq, &circle(200, 1.0), &cfg).unwrap();
        assert!(large.witness_capacity >= small.witness_capacity * 0.98, "{} vs {}", large.witness_capacity, small.witness_capacity);
        assert!(large.c2 >= small.c2 * 0.98, "{} vs {}", large.c2, small.c2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn geometric_evaluation_is_sound(
            which in 0usize..3,
            log_r2 in -2.3f64..4.6,
            arg2 in 0.0f64..std::f64::consts::TAU,
            frac in 0.0f64..0.5,
            arg1 in 0.0f64..std::f64::consts::TAU,
        ) {
            static CERTS: OnceLock<Vec<(Complex64, PolynomialSequence, ExtensionCertificate)>> = OnceLock::new();
            let certs = CERTS.get_or_init(|| {
                [c(1.0, 0.0), c(2.0, 0.0), c(1.0, 1.0)]
                    .into_iter()
                    .map(|l| {
                        let (s, cert) = geometric_cert(l);
                        (l, s, cert)
                    })
                    .collect()
            });
            let (lambda, seq, cert) = &certs[which];
            let z2 = Complex64::from_polar(log_r2.exp(), arg2);
            let radius = cert.radius_at(z2.norm());
            prop_assert!(radius <= 1.0 / (lambda.norm() * z2.norm()));
            let z1 = Complex64::from_polar(frac * radius, arg1);
            let e = evaluate(cert, seq, &[z1], z2, 1e-9).unwrap();
            let exact = 1.0 / (1.0 - lambda * z1 * z2);
            prop_assert!((e.value - exact).norm() < 1e-8);
            // The reported tail bound is an actual bound on the truncation error.
            prop_assert!((e.value - exact).norm() <= e.tail_bound * (1.0 + 1e-6) + 1e-14);
        }
    }
}
