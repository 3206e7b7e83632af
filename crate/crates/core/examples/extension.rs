// Certify the domain of 1/(1 − λ z₁ z₂) from its coefficients Pₙ = (λz₂)ⁿ
// and 200 samples of the unit circle, then evaluate inside it.

use holext::extension::{certify_extension, evaluate, ExtensionConfig, PolynomialSequence};
use holext::Complex64;

fn main() {
    let lambda = Complex64::new(1.0, 1.0);
    let seq = PolynomialSequence::geometric(lambda, 60);
    let circle: Vec<Complex64> = (0..200)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 200.0))
        .collect();
    let cert = certify_extension(&seq, &circle, &ExtensionConfig::default()).unwrap();
    println!(
        "deg Pn <= {} + {} n, rho1 = {:.4}, M0 = {}, gammaC = {:.4}",
        cert.c0, cert.c1, cert.rho1, cert.m0, cert.gamma_c
    );
    println!("certified: |z1| < {:.4} / (1 + |z2|)^{}", cert.c2, cert.exponent);

    for r in [0.1, 1.0, 10.0, 100.0] {
        println!("  |z2| = {r:>5}: certified {:.5}, true {:.5}", cert.radius_at(r), 1.0 / (lambda.norm() * r));
    }

    let (z1, z2) = (Complex64::new(0.1, 0.05), Complex64::new(-1.0, 2.0));
    let e = evaluate(&cert, &seq, &[z1], z2, 1e-12).unwrap();
    let exact = 1.0 / (1.0 - lambda * z1 * z2);
    println!("f({z1}, {z2}) = {:.12} ({} terms, tail <= {:.1e}), exact {:.12}", e.value, e.terms_used, e.tail_bound, exact);
}
