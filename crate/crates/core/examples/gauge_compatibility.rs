// Differentiating the gauge-acted family `g(x) A_hbar(x, y) g(y)^-1` at
// hbar = 0 recovers the classical gauge action on the connection.

use tangent_lab::field::LieField;
use tangent_lab::gauge::GaugeField;
use tangent_lab::group::{AlgebraElement, Group};
use tangent_lab::holonomy::SmoothConnection;
use tangent_lab::linalg::C64;
use tangent_lab::qconn::{compatibility_check, random_samples, QConnection, FD_STEPS};
use rand::SeedableRng;

pub fn run_example() -> tangent_lab::Result<f64> {
    // g = exp(i 0.5 sin 2 pi x)
    let y = LieField::from_modes(Group::U1, 1, vec![([1, 0], vec![C64::new(0.0, -0.5)])])?;
    let a = SmoothConnection::constant(&[AlgebraElement::from_coords(Group::U1, &[0.8])])?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
    let samples = random_samples(1, 50, &mut rng);
    let r = compatibility_check(&GaugeField::exp_of(y), &QConnection::exact(a), &samples, &FD_STEPS)?;
    for (h, e) in r.central.params.iter().zip(&r.central.defects) {
        println!("step {h:.1e}: central defect {e:.3e}");
    }
    println!("Richardson defect {:.2e}", r.richardson);
    assert!(r.richardson <= 1e-6);
    Ok(r.richardson)
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
