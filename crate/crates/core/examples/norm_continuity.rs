// Operator norms of quantized symbols approach the sup norms of the
// symbols as hbar goes to zero.

use tangent_lab::grid::Grid;
use tangent_lab::sdq::{dyadic_hbars, norm_continuity, norm_suite};

pub fn run_example() -> tangent_lab::Result<f64> {
    let grid = Grid::new(256, 1)?;
    let hbars = dyadic_hbars(8, 64);
    let mut worst: f64 = 0.0;
    for f in norm_suite(1) {
        let r = norm_continuity(&f, &hbars, grid)?;
        println!(
            "sup {:.4}  norms {:?}",
            r.sup_norm,
            r.norms.iter().map(|n| format!("{n:.4}")).collect::<Vec<_>>()
        );
        worst = worst.max(r.final_defect());
    }
    assert!(worst <= 0.05);
    Ok(worst)
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
