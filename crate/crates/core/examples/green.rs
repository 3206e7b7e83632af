// Green function of the complement: closed form against the Fekete potential.

use holext::capacity::{green_function, GreenMethod};
use holext::{CompactSet, Complex64};

fn main() {
    let disk = CompactSet::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
    let segment = CompactSet::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
    for (name, set) in [("disk", disk), ("segment", segment)] {
        let exact = green_function(&set, GreenMethod::Analytic).unwrap();
        let approx = green_function(&set, GreenMethod::Fekete).unwrap();
        println!("{name}: Robin constant {:.4} (Fekete {:.4})", exact.robin_constant(), approx.robin_constant());
        for z in [Complex64::new(0.3, 0.0), Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-5.0, 5.0)] {
            println!("  g({z}) = {:.6}  Fekete {:.6}", exact.eval(z), approx.eval(z));
        }
    }
}
