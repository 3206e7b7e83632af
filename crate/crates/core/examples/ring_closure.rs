// Series with linearly bounded coefficient degrees form a ring: products keep
// the growth constants within C0_f + C0_g and max(C1_f, C1_g).

use holext::bernstein::Polynomial1D;
use holext::extension::{fit_degree_growth, ring_multiply, MultiIndex, PolynomialSequence};
use holext::Complex64;

fn main() {
    let one = Complex64::new(1.0, 0.0);
    // deg Pₙ = 2 + n and deg Qₙ = 3 + n.
    let f = PolynomialSequence::from_fn(1, 12, move |n| Polynomial1D::monomial(2 + n.norm() as usize, one)).unwrap();
    let g = PolynomialSequence::from_fn(1, 12, |n| Polynomial1D::from_real(&vec![1.0; 4 + n.norm() as usize])).unwrap();
    let fg = ring_multiply(&f, &g, 12).unwrap();
    for (name, s) in [("f", &f), ("g", &g), ("fg", &fg)] {
        let growth = fit_degree_growth(s).unwrap();
        println!("{name:>2}: deg <= {} + {} n", growth.c0, growth.c1);
    }
    println!("(fg)_3 = {:?}", fg.term(&MultiIndex::single(3)).coefficients().iter().map(|c| c.re).collect::<Vec<_>>());

    // Geometric series squared: (n + 1) zⁿ.
    let geo = PolynomialSequence::geometric(one, 12);
    let sq = ring_multiply(&geo, &geo, 12).unwrap();
    println!("(1/(1 - z1 z2))^2 coefficient of z1^5: {:?}", sq.term(&MultiIndex::single(5)).coefficients().last().unwrap());
}
