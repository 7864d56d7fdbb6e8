// Convolution kernels on a grid: associativity, the involution, gauge
// invariance of the trace and the binary export format.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangent_lab::gauge::GaugeField;
use tangent_lab::grid::Grid;
use tangent_lab::group::Group;
use tangent_lab::holonomy::SmoothConnection;
use tangent_lab::op_rep::{
    convolve, export_kernel, gauge_conjugate, involution, materialize, read_kernel, trace, Kernel,
};
use tangent_lab::qconn::QConnection;

pub fn run_example() -> tangent_lab::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let grid = Grid::new(8, 2)?;
    let (a, b, c) = (
        Kernel::random(grid, 2, &mut rng),
        Kernel::random(grid, 2, &mut rng),
        Kernel::random(grid, 2, &mut rng),
    );
    let left = convolve(&convolve(&a, &b)?, &c)?;
    let right = convolve(&a, &convolve(&b, &c)?)?;
    let assoc = left.distance(&right) / left.frobenius();
    let star = involution(&convolve(&a, &b)?).distance(&convolve(&involution(&b), &involution(&a))?);
    println!("associativity {assoc:.1e}, involution {star:.1e}");

    let q = QConnection::exact(SmoothConnection::random(Group::SU2, 2, 1, 1.0, &mut rng));
    let k = materialize(&q, 0.25, grid)?;
    let g = GaugeField::random(Group::SU2, 2, 2, 1.0, &mut rng);
    let tr = (trace(&gauge_conjugate(&k, &g)?) - trace(&k)).norm();
    println!("trace gauge defect {tr:.1e}");

    let dir = std::env::temp_dir().join("tangent-lab-kernel-example");
    let sidecar = export_kernel(&k, &dir, "holonomy_kernel")?;
    let back = read_kernel(std::fs::File::open(dir.join("holonomy_kernel.bin"))?)?;
    println!("exported {}x{} kernel, norm {:.4}", sidecar.grid_n, sidecar.grid_d, sidecar.operator_norm);
    assert!(back.distance(&k) == 0.0 && tr <= 1e-12 && assoc <= 1e-10);
    Ok(assoc.max(tr))
}

fn main() -> tangent_lab::Result<()> {
    run_example().map(|_| ())
}
