// Midpoint-rule holonomy of a random SU(2) connection: second-order
// convergence in the step count, and composition under lattice refinement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangent_lab::graph::lattice_system;
use tangent_lab::group::Group;
use tangent_lab::holonomy::{hol_graph, holonomy, SmoothConnection};
use tangent_lab::torus::{Curve, TorusPoint};

pub fn run_example() -> tangent_lab::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = SmoothConnection::random(Group::SU2, 2, 2, 1.0, &mut rng);
    let c = Curve::geodesic(TorusPoint::d2(0.1, 0.7), &[0.8, -0.4]);
    let reference = holonomy(&a, &c, 8192);
    let mut last = f64::NAN;
    for steps in [16, 32, 64, 128] {
        let e = holonomy(&a, &c, steps).matrix().distance(reference.matrix());
        println!("steps {steps:>4}: error {e:.3e}  ratio {:.2}", last / e);
        last = e;
    }

    let sys = lattice_system(2, 2)?;
    let coarse = hol_graph(&a, sys.level(1), 1024);
    let fine = hol_graph(&a, sys.level(2), 512);
    let mut worst: f64 = 0.0;
    for (e, kids) in sys.refinement[0].iter().enumerate() {
        let composed = fine.values[kids[0]] * fine.values[kids[1]];
        worst = worst.max(coarse.values[e].matrix().distance(composed.matrix()));
    }
    println!("refinement composition defect {worst:.2e}");
    assert!(worst <= 1e-8);
    Ok(worst)
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
