// The gluing law of an exact-holonomy q-connection: exact for a constant
// U(1) connection, second order in hbar for a random SU(2) one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangent_lab::group::{AlgebraElement, Group};
use tangent_lab::holonomy::SmoothConnection;
use tangent_lab::qconn::{glue_check, random_samples, QConnection};
use tangent_lab::sdq::dyadic_hbars;

pub fn run_example() -> tangent_lab::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let hbars = dyadic_hbars(2, 64);
    let samples = random_samples(2, 40, &mut rng);

    let constant = SmoothConnection::constant(&[
        AlgebraElement::from_coords(Group::U1, &[1.3]),
        AlgebraElement::from_coords(Group::U1, &[-0.4]),
    ])?;
    let u1 = glue_check(&QConnection::exact(constant), &samples, &hbars)?;
    println!("U1 constant: max gluing defect {:.2e}", u1.gluing.max);

    let su2 = QConnection::exact(SmoothConnection::random(Group::SU2, 2, 1, 1.0, &mut rng));
    let r = glue_check(&su2, &samples, &hbars)?;
    for (h, e) in r.gluing.params.iter().zip(&r.gluing.defects) {
        println!("SU2 hbar {h:<9} gluing {e:.3e}");
    }
    let slope = r.gluing.slope.unwrap_or(f64::NAN);
    println!("SU2 fitted order {slope:.3}");
    assert!(u1.gluing.max <= 1e-12 && slope >= 1.9);
    Ok(slope)
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
