// Haar integrals of cylinder functions agree with the integrals of their
// pullbacks to the refined lattice.

use tangent_lab::graph::lattice_system;
use tangent_lab::projlim::{consistency_check, consistency_suite};

pub fn run_example() -> tangent_lab::Result<usize> {
    let sys = lattice_system(2, 2)?;
    let mut within = 0;
    for (i, (name, f)) in consistency_suite(&sys)?.into_iter().enumerate() {
        let r = consistency_check(&f, &sys, 20_000, 100 + i as u64)?;
        println!(
            "{name:<16} coarse {:+.4}  fine {:+.4}  defect/sigma {:.2}",
            r.coarse.mean.re,
            r.fine.mean.re,
            if r.sigma > 0.0 { r.defect / r.sigma } else { 0.0 }
        );
        within += r.within_3_sigma as usize;
    }
    assert_eq!(within, 6);
    Ok(within)
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
