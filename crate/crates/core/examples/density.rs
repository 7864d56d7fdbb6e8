// Every assignment of holonomies to a lattice graph is realized by a
// smooth connection.

use tangent_lab::graph::lattice_system;
use tangent_lab::group::Group;
use tangent_lab::projlim::density_experiment;

pub fn run_example() -> tangent_lab::Result<f64> {
    let u1 = density_experiment(&lattice_system(1, 2)?, 2, Group::U1, 10, 0, 1e-6)?;
    let su2 = density_experiment(&lattice_system(2, 1)?, 1, Group::SU2, 4, 0, 1e-4)?;
    println!("U1 d=1: max distance {:.2e} ({} trials)", u1.max_distance, u1.distances.len());
    println!("SU2 d=2: max distance {:.2e} ({} trials)", su2.max_distance, su2.distances.len());
    assert!(u1.success && su2.success);
    Ok(u1.max_distance.max(su2.max_distance))
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
