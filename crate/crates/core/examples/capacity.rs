// Logarithmic capacity of a few compact sets, with the d_n sequence that
// the estimate is read off.

use holext::capacity::{capacity, capacity_up_to, DEFAULT_POLAR_THRESHOLD};
use holext::{CompactSet, Complex64};

fn main() {
    let origin = Complex64::new(0.0, 0.0);
    let sets = [
        ("unit disk", CompactSet::disk(origin, 1.0).unwrap(), 1.0),
        ("[-1, 1]", CompactSet::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap(), 0.5),
        ("disk radius 3 at 2+i", CompactSet::disk(Complex64::new(2.0, 1.0), 3.0).unwrap(), 3.0),
    ];
    for (name, set, exact) in &sets {
        let est = capacity(set, 128).unwrap();
        println!("{name:>22}: cap ≈ {:.4} (exact {exact}), error indicator {:.2e}", est.value, est.error_indicator);
        let seq: Vec<String> = est.diameter_sequence.iter().map(|(n, d)| format!("d_{n} = {d:.4}")).collect();
        println!("{:>22}  {}", "", seq.join(", "));
    }

    // Finite sets are polar.
    let points = CompactSet::cloud(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
    let est = capacity_up_to(&points, 128).unwrap();
    println!("two points: cap = {}, polar = {}", est.value, est.is_polar(DEFAULT_POLAR_THRESHOLD));
}
