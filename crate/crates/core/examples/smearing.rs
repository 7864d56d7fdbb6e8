// Smearing the graph of a U(1) q-connection into a normalized function on
// pairs times the group, and its equivariance under gauge transformations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangent_lab::gauge::GaugeField;
use tangent_lab::grid::Grid;
use tangent_lab::group::Group;
use tangent_lab::holonomy::SmoothConnection;
use tangent_lab::qconn::{gauge_act_hbar, QConnection};
use tangent_lab::sdq::{embed_qconnection, equivariance_defect};

pub fn run_example() -> tangent_lab::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let q = QConnection::exact(SmoothConnection::random(Group::U1, 1, 2, 1.0, &mut rng));
    let g = GaugeField::random(Group::U1, 1, 2, 0.8, &mut rng);
    let grid = Grid::new(8, 1)?;
    let f = embed_qconnection(&q, 0.25, grid, 128, 0.2)?;
    let fg = embed_qconnection(&gauge_act_hbar(&g, &q)?, 0.25, grid, 128, 0.2)?;
    let norm = f.normalization_defect();
    let equi = equivariance_defect(&f, &fg, &g)?;
    println!("normalization {norm:.1e}, concentration {:.4}, equivariance {equi:.1e}", f.min_concentration());
    assert!(norm <= 1e-10 && equi <= 1e-8);
    Ok(equi)
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
