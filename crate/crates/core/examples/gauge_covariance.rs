// Gauge covariance of holonomy: transforming the connection by `g`
// conjugates every edge holonomy by the values of `g` at its endpoints.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangent_lab::gauge::GaugeField;
use tangent_lab::group::Group;
use tangent_lab::holonomy::{gauge_transform_fit, holonomy, SmoothConnection};
use tangent_lab::torus::{Curve, TorusPoint};

pub fn run_example() -> tangent_lab::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = SmoothConnection::random(Group::SU2, 1, 1, 0.8, &mut rng);
    let g = GaugeField::random(Group::SU2, 1, 1, 0.5, &mut rng);
    let refit = gauge_transform_fit(&a, &g, 40)?;
    println!("refit residual {:.2e}", refit.residual);

    let (x, y) = (TorusPoint::d1(0.15), TorusPoint::d1(0.6));
    let c = Curve::geodesic(x, &[0.45]);
    let lhs = holonomy(&refit.connection, &c, 2048);
    let rhs = g.value(&x) * holonomy(&a, &c, 2048) * g.value(&y).inverse();
    let d = lhs.matrix().distance(rhs.matrix());
    println!("covariance defect {d:.2e}");
    assert!(d <= 1e-6);
    Ok(d)
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
