// Γ-capacity separates the bidisk (capacity 1) from a flat disk inside a
// complex line, whose fibers are single points.

use holext::gamma::{gamma_cap, reduce_to_m1, GridSpec};
use holext::set_model::Region;
use holext::{CompactSet, Complex64};

fn main() {
    let disk = CompactSet::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
    let bidisk = Region::Product { factors: vec![disk.clone(), disk.clone()] };
    let line = Region::Product {
        factors: vec![disk, CompactSet::cloud(vec![Complex64::new(0.0, 0.0)]).unwrap()],
    };
    let grid = GridSpec { fiber_resolution: 32, projected_resolution: 24, ..GridSpec::default() };

    let b = gamma_cap(&bidisk, 1, 0, &grid).unwrap();
    println!("bidisk: Γ-cap ≈ {:.4}", b.value);
    let (plane, u) = reduce_to_m1(&bidisk, &b).unwrap();
    println!("  reduced to a plane cloud of {} points with unitary #{}", plane.samples().len(), u.index);

    let l = gamma_cap(&line, 4, 1, &grid).unwrap();
    println!("disk in a line: Γ-cap ≈ {:.2e} over {} unitaries", l.value, l.per_unitary.len());
    println!("  reduction: {}", reduce_to_m1(&line, &l).unwrap_err());
}
