// Quantization of affine symbols on the dual of su(2): the Dirac
// condition holds exactly for the Lie-Poisson bracket.

use tangent_lab::group::Group;
use tangent_lab::sdq::{algebraic_dirac_defect, lie_poisson_bracket, LieSymbol};

pub fn run_example() -> tangent_lab::Result<f64> {
    let f = LieSymbol::linear(Group::SU2, &[0.3, -1.0, 0.5]);
    let g = LieSymbol::linear(Group::SU2, &[1.2, 0.4, -0.7]);
    let bracket = lie_poisson_bracket(&f, &g)?;
    println!("bracket degree {}", bracket.degree());
    let mut worst: f64 = 0.0;
    for hbar in [0.5, 0.1, 0.01] {
        let d = algebraic_dirac_defect(&f, &g, hbar)?;
        println!("hbar {hbar}: defect {d:.2e}");
        worst = worst.max(d);
    }
    assert!(worst <= 1e-12);
    Ok(worst)
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
