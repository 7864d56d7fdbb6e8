// Strict deformation quantization on the cotangent bundle of the circle:
// the Dirac-condition defect of an exact pair and of a generic pair.

use tangent_lab::grid::Grid;
use tangent_lab::sdq::{dirac_defect, dyadic_hbars, exact_pair, generic_pair, Symbol};

pub fn run_example() -> tangent_lab::Result<f64> {
    let grid = Grid::new(256, 1)?;
    let hbars = dyadic_hbars(8, 64);
    let (p, cos) = exact_pair(1);
    let exact = dirac_defect(&Symbol::CotangentTorus(p), &Symbol::CotangentTorus(cos), &hbars, grid)?;
    let (f, g) = generic_pair(1);
    let generic = dirac_defect(&Symbol::CotangentTorus(f), &Symbol::CotangentTorus(g), &hbars, grid)?;
    for i in 0..hbars.len() {
        println!(
            "hbar {:<9} exact {:.2e}  generic {:.3e}",
            hbars[i], exact.defects[i], generic.defects[i]
        );
    }
    let slope = generic.fitted_slope.unwrap_or(f64::NAN);
    println!("generic slope {slope:.3}");
    assert!(exact.max_defect() <= 1e-8 && slope >= 0.9);
    Ok(slope)
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
