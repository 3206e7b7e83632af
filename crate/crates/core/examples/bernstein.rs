// The Bernstein bound |P(z)| ≤ ‖P‖_K e^{deg P · g(z)}: sharp for zⁿ on the
// disk, nearly sharp for Chebyshev polynomials on [-1, 1].

use holext::bernstein::{sup_norm, verify_bernstein, Polynomial1D};
use holext::{CompactSet, Complex64};

fn main() {
    let disk = CompactSet::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
    let segment = CompactSet::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
    let points = [Complex64::new(1.5, 0.0), Complex64::new(0.0, 2.0), Complex64::new(-3.0, 0.5)];

    let z5 = Polynomial1D::monomial(5, Complex64::new(1.0, 0.0));
    let t8 = Polynomial1D::chebyshev(8);
    for (name, p, set) in [("z^5 on the disk", &z5, &disk), ("T_8 on [-1, 1]", &t8, &segment)] {
        let report = verify_bernstein(p, set, &points).unwrap();
        println!("{name}: sup norm {:.6}, {} violations", sup_norm(p, set), report.violations);
        for ch in &report.checks {
            println!("  z = {}: |P| = {:.4e}, bound = {:.4e}, ratio {:.4}", ch.z, ch.abs_p, ch.bound, ch.ratio);
        }
    }
}
