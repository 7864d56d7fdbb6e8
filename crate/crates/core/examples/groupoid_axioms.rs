// Groupoid laws on random composable triples, for the pair, tangent,
// group and product groupoids of the torus.

use tangent_lab::group::Group;
use tangent_lab::groupoid::{axiom_check, Variant};

pub fn run_example() -> tangent_lab::Result<f64> {
    let mut worst: f64 = 0.0;
    for v in Variant::ALL {
        let r = axiom_check(v, Group::SU2, 2, 500, 42)?;
        println!(
            "{:<8} assoc {:.1e}  ident {:.1e}  inverse {:.1e}",
            v.name(),
            r.associativity,
            r.identity,
            r.inverse
        );
        worst = worst.max(r.max_defect());
    }
    assert!(worst <= 1e-12);
    Ok(worst)
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
