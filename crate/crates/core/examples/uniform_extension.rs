// With sublinear degree growth the certified radius in z₁ does not shrink as
// |z₂| grows. Linear growth is rejected.

use holext::extension::{certify_uniform, evaluate, ExtensionConfig, PolynomialSequence};
use holext::Complex64;

fn main() {
    let circle: Vec<Complex64> = (0..200)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 200.0))
        .collect();
    let cfg = ExtensionConfig { z2_max: 100.0, ..ExtensionConfig::default() };

    let sqrt = PolynomialSequence::sqrt_degree(400);
    let cert = certify_uniform(&sqrt, &circle, &cfg).unwrap();
    println!(
        "deg Pn = floor(sqrt n): |z1| < {:.4} for |z2| <= {} (residual slope {:.4} after n = {})",
        cert.c2,
        cfg.z2_max,
        cert.c1,
        cert.tail_start.unwrap()
    );
    let z1 = [Complex64::new(0.5 * cert.c2, 0.0)];
    for z2 in [Complex64::new(0.5, 0.0), Complex64::new(0.0, 20.0)] {
        let e = evaluate(&cert, &sqrt, &z1, z2, 1e-8).unwrap();
        println!("  f({}, {z2}) = {:.8} using {} terms", z1[0], e.value, e.terms_used);
    }

    let geometric = PolynomialSequence::geometric(Complex64::new(1.0, 0.0), 60);
    println!("geometric: {}", certify_uniform(&geometric, &circle, &cfg).unwrap_err());
}
