//! Discretized convolution kernels on `T^d x T^d` acting on `L^2(T^d, C^N)`.
//!
//! A kernel is stored as one dense matrix `M` with `M[(y, a), (x, b)] = K(x, y)_{ab}`,
//! so the action `(K phi)(y) = sum_x w K(x, y) phi(x)` with `w = 1 / n^d` is
//! `w M phi`. Composition is fixed so that `convolve(K1, K2)` acts as
//! `apply(K2) . apply(K1)`, which makes `M(K1 * K2) = w M2 M1`.

use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gauge::GaugeField;
use crate::grid::Grid;
use crate::groupoid::check_hbar;
use crate::linalg::{CMat, C64};
use crate::qconn::QConnection;
use crate::{Error, Result};

/// Magic bytes opening the binary kernel layout.
pub const KERNEL_MAGIC: &[u8; 8] = b"TLKERN01";

/// Default power-iteration count.
pub const NORM_ITERS: usize = 200;

/// Seed of the power-iteration start vector.
pub const NORM_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub grid: Grid,
    /// Vector dimension `N`.
    pub fibre: usize,
    /// Entry `(x, a)` at index `x * N + a`.
    pub values: DVector<C64>,
}

impl GridFunction {
    pub fn zeros(grid: Grid, fibre: usize) -> Self {
        GridFunction {
            grid,
            fibre,
            values: DVector::zeros(grid.len() * fibre),
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C64>(grid: Grid, fibre: usize, mut f: F) -> Self {
        GridFunction {
            grid,
            fibre,
            values: DVector::from_fn(grid.len() * fibre, |i, _| f(i / fibre, i % fibre)),
        }
    }

    pub fn random<R: Rng + ?Sized>(grid: Grid, fibre: usize, rng: &mut R) -> Self {
        Self::from_fn(grid, fibre, |_, _| random_c64(rng))
    }

    pub fn at(&self, x: usize, a: usize) -> C64 {
        self.values[x * self.fibre + a]
    }

    /// `L^2` norm with quadrature weight `1 / n^d`.
    pub fn norm(&self) -> f64 {
        (self.grid.weight()).sqrt() * self.values.norm()
    }

    /// Weighted inner product, antilinear in `self`.
    pub fn inner(&self, other: &GridFunction) -> C64 {
        self.values.dotc(&other.values) * self.grid.weight()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

fn random_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    pub grid: Grid,
    /// Matrix size `N` of the values.
    pub fibre: usize,
    pub hbar: Option<f64>,
    matrix: DMatrix<C64>,
}

impl Kernel {
    /// Kernel with `K(x, y) = f(x, y)` for grid indices `x, y`.
    pub fn from_fn<F>(grid: Grid, fibre: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> CMat + Sync,
    {
        let n = grid.len();
        let dim = n * fibre;
        // rows are indexed by y; build them in parallel
        let rows: Vec<Vec<C64>> = (0..n)
            .into_par_iter()
            .map(|y| {
                let mut row = vec![C64::new(0.0, 0.0); fibre * dim];
                for x in 0..n {
                    let k = f(x, y);
                    for a in 0..fibre {
                        for b in 0..fibre {
                            row[a * dim + x * fibre + b] = k.get(a, b);
                        }
                    }
                }
                row
            })
            .collect();
        let matrix = DMatrix::from_row_iterator(dim, dim, rows.into_iter().flatten());
        Kernel {
            grid,
            fibre,
            hbar: None,
            matrix,
        }
    }

    /// Wrap a matrix in the `M[(y, a), (x, b)]` layout.
    pub fn from_matrix(grid: Grid, fibre: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = grid.len() * fibre;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidArgument(format!(
                "kernel matrix must be {dim} x {dim}, got {} x {}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Kernel {
            grid,
            fibre,
            hbar: None,
            matrix,
        })
    }

    pub fn zeros(grid: Grid, fibre: usize) -> Self {
        let dim = grid.len() * fibre;
        Kernel {
            grid,
            fibre,
            hbar: None,
            matrix: DMatrix::zeros(dim, dim),
        }
    }

    /// The unit of the convolution algebra: `n^d I [x = y]`.
    pub fn identity(grid: Grid, fibre: usize) -> Self {
        let dim = grid.len() * fibre;
        Kernel {
            grid,
            fibre,
            hbar: None,
            matrix: DMatrix::identity(dim, dim) * C64::new(grid.len() as f64, 0.0),
        }
    }

    pub fn random<R: Rng + ?Sized>(grid: Grid, fibre: usize, rng: &mut R) -> Self {
        let dim = grid.len() * fibre;
        Kernel {
            grid,
            fibre,
            hbar: None,
            matrix: DMatrix::from_fn(dim, dim, |_, _| random_c64(rng)),
        }
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = Some(hbar);
        self
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// `K(x, y)` as an `N x N` matrix.
    pub fn value(&self, x: usize, y: usize) -> DMatrix<C64> {
        let f = self.fibre;
        self.matrix.view((y * f, x * f), (f, f)).into_owned()
    }

    pub fn weight(&self) -> f64 {
        self.grid.weight()
    }

    fn ensure_compatible(&self, other_grid: &Grid, other_fibre: usize) -> Result<()> {
        self.grid.ensure_same(other_grid)?;
        if self.fibre != other_fibre {
            return Err(Error::GridMismatch(format!(
                "fibre dimension {} vs {}",
                self.fibre, other_fibre
            )));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.matrix.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Frobenius norm of the stored matrix, used for relative comparisons.
    pub fn frobenius(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn distance(&self, other: &Kernel) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    pub fn scale(&self, s: C64) -> Kernel {
        Kernel {
            matrix: &self.matrix * s,
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Kernel) -> Result<Kernel> {
        self.ensure_compatible(&other.grid, other.fibre)?;
        Ok(Kernel {
            matrix: &self.matrix - &other.matrix,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Kernel) -> Result<Kernel> {
        self.ensure_compatible(&other.grid, other.fibre)?;
        Ok(Kernel {
            matrix: &self.matrix + &other.matrix,
            ..self.clone()
        })
    }
}

/// `(K phi)(y) = sum_x w K(x, y) phi(x)`.
pub fn apply(k: &Kernel, phi: &GridFunction) -> Result<GridFunction> {
    k.ensure_compatible(&phi.grid, phi.fibre)?;
    Ok(GridFunction {
        grid: k.grid,
        fibre: k.fibre,
        values: (&k.matrix * &phi.values) * C64::new(k.weight(), 0.0),
    })
}

/// `(K1 * K2)(x, z) = sum_y w K2(y, z) K1(x, y)`, acting as `apply(K2) . apply(K1)`.
pub fn convolve(k1: &Kernel, k2: &Kernel) -> Result<Kernel> {
    k1.ensure_compatible(&k2.grid, k2.fibre)?;
    Ok(Kernel {
        grid: k1.grid,
        fibre: k1.fibre,
        hbar: k1.hbar.or(k2.hbar),
        matrix: (&k2.matrix * &k1.matrix) * C64::new(k1.weight(), 0.0),
    })
}

/// `K*(x, y) = K(y, x)^dagger`.
pub fn involution(k: &Kernel) -> Kernel {
    Kernel {
        matrix: k.matrix.adjoint(),
        ..k.clone()
    }
}

/// `w sum_x tr K(x, x)`.
pub fn trace(k: &Kernel) -> C64 {
    k.matrix.trace() * k.weight()
}

/// `K'(x, y) = g(x) K(x, y) g(y)^-1` at grid samples.
pub fn gauge_conjugate(k: &Kernel, g: &GaugeField) -> Result<Kernel> {
    if g.group().matrix_dim() != k.fibre {
        return Err(Error::GridMismatch(format!(
            "gauge group acts on C^{} but the kernel has fibre {}",
            g.group().matrix_dim(),
            k.fibre
        )));
    }
    if g.dim() != k.grid.d {
        return Err(Error::GridMismatch(format!(
            "gauge field on T^{} but kernel grid on T^{}",
            g.dim(),
            k.grid.d
        )));
    }
    let f = k.fibre;
    let gs: Vec<DMatrix<C64>> = (0..k.grid.len())
        .map(|i| {
            let m = g.value(&k.grid.point(i));
            DMatrix::from_fn(f, f, |a, b| m.matrix().get(a, b))
        })
        .collect();
    // block (y, x) becomes g(x) B g(y)^dagger
    let mut out = k.matrix.clone();
    for y in 0..k.grid.len() {
        let gy_inv = gs[y].adjoint();
        for (x, gx) in gs.iter().enumerate() {
            let block = k.matrix.view((y * f, x * f), (f, f));
            let new = gx * block * &gy_inv;
            out.view_mut((y * f, x * f), (f, f)).copy_from(&new);
        }
    }
    Ok(Kernel {
        matrix: out,
        ..k.clone()
    })
}

/// Operator norm `w sigma_max(M)` by power iteration on `M^dagger M`.
///
/// The estimate is the Rayleigh quotient of the current iterate, which is
/// nondecreasing in `iters`. The start vector is drawn from a fixed seed.
pub fn operator_norm(k: &Kernel, iters: usize) -> f64 {
    operator_norm_seeded(k, iters, NORM_SEED)
}

pub fn operator_norm_seeded(k: &Kernel, iters: usize, seed: u64) -> f64 {
    let dim = k.matrix.nrows();
    if dim == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DVector::from_fn(dim, |_, _| random_c64(&mut rng));
    let mut best = 0.0f64;
    for _ in 0..iters.max(1) {
        let nv = v.norm();
        if nv == 0.0 {
            return 0.0;
        }
        v /= C64::new(nv, 0.0);
        let mv = &k.matrix * &v;
        let rayleigh = mv.norm();
        best = best.max(rayleigh);
        v = k.matrix.adjoint() * mv;
    }
    best * k.weight()
}

/// Sample `A_hbar(x, y)` on every ordered pair of grid points.
pub fn materialize(q: &QConnection, hbar: f64, grid: Grid) -> Result<Kernel> {
    check_hbar(hbar)?;
    if grid.d != q.dim() {
        return Err(Error::GridMismatch(format!(
            "q-connection on T^{} but grid on T^{}",
            q.dim(),
            grid.d
        )));
    }
    let pts = grid.points();
    let k = Kernel::from_fn(grid, q.group().matrix_dim(), |x, y| {
        *q.value(&pts[x], &pts[y], hbar).matrix()
    });
    Ok(k.with_hbar(hbar))
}

/// Metadata written next to a binary kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSidecar {
    pub format: String,
    pub grid_n: usize,
    pub grid_d: usize,
    pub fibre: usize,
    pub hbar: Option<f64>,
    pub layout: String,
    pub trace: [f64; 2],
    pub operator_norm: f64,
}

/// Binary layout: magic, `n`, `d`, `N` as little-endian `u32`, a `u8` flag and
/// `f64` for `hbar`, then `(re, im)` `f64` pairs in row-major `(x, y, a, b)` order.
pub fn write_kernel<W: Write>(k: &Kernel, mut w: W) -> Result<()> {
    w.write_all(KERNEL_MAGIC)?;
    w.write_u32::<LittleEndian>(k.grid.n as u32)?;
    w.write_u32::<LittleEndian>(k.grid.d as u32)?;
    w.write_u32::<LittleEndian>(k.fibre as u32)?;
    w.write_u8(k.hbar.is_some() as u8)?;
    w.write_f64::<LittleEndian>(k.hbar.unwrap_or(0.0))?;
    let (n, f) = (k.grid.len(), k.fibre);
    for x in 0..n {
        for y in 0..n {
            for a in 0..f {
                for b in 0..f {
                    let z = k.matrix[(y * f + a, x * f + b)];
                    w.write_f64::<LittleEndian>(z.re)?;
                    w.write_f64::<LittleEndian>(z.im)?;
                }
            }
        }
    }
    Ok(())
}

pub fn read_kernel<R: Read>(mut r: R) -> Result<Kernel> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != KERNEL_MAGIC {
        return Err(Error::InvalidArgument("not a kernel file".into()));
    }
    let n = r.read_u32::<LittleEndian>()? as usize;
    let d = r.read_u32::<LittleEndian>()? as usize;
    let f = r.read_u32::<LittleEndian>()? as usize;
    let has_hbar = r.read_u8()? != 0;
    let hbar = r.read_f64::<LittleEndian>()?;
    let grid = Grid::new(n, d)?;
    let len = grid.len();
    let mut k = Kernel::zeros(grid, f);
    for x in 0..len {
        for y in 0..len {
            for a in 0..f {
                for b in 0..f {
                    let re = r.read_f64::<LittleEndian>()?;
                    let im = r.read_f64::<LittleEndian>()?;
                    k.matrix[(y * f + a, x * f + b)] = C64::new(re, im);
                }
            }
        }
    }
    k.hbar = has_hbar.then_some(hbar);
    Ok(k)
}

/// Write `<stem>.bin` and `<stem>.json` into `dir`.
pub fn export_kernel(k: &Kernel, dir: &Path, stem: &str) -> Result<KernelSidecar> {
    std::fs::create_dir_all(dir)?;
    let file = std::fs::File::create(dir.join(format!("{stem}.bin")))?;
    write_kernel(k, std::io::BufWriter::new(file))?;
    let tr = trace(k);
    let sidecar = KernelSidecar {
        format: String::from_utf8_lossy(KERNEL_MAGIC).into_owned(),
        grid_n: k.grid.n,
        grid_d: k.grid.d,
        fibre: k.fibre,
        hbar: k.hbar,
        layout: "u32 n, u32 d, u32 N, u8 has_hbar, f64 hbar, then f64 (re, im) over x, y, a, b row-major, little-endian".into(),
        trace: [tr.re, tr.im],
        operator_norm: operator_norm(k, NORM_ITERS),
    };
    std::fs::write(
        dir.join(format!("{stem}.json")),
        serde_json::to_string_pretty(&sidecar)?,
    )?;
    Ok(sidecar)
}

/// One row of a trace/norm summary table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSummary {
    pub label: String,
    pub trace_re: f64,
    pub trace_im: f64,
    pub operator_norm: f64,
}

impl KernelSummary {
    pub fn of(label: &str, k: &Kernel) -> Self {
        let t = trace(k);
        KernelSummary {
            label: label.to_string(),
            trace_re: t.re,
            trace_im: t.im,
            operator_norm: operator_norm(k, NORM_ITERS),
        }
    }
}

pub fn write_summary_csv<W: Write>(rows: &[KernelSummary], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{AlgebraElement, Group};
    use crate::holonomy::SmoothConnection;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn grids() -> [Grid; 2] {
        [Grid::new(16, 1).unwrap(), Grid::new(8, 2).unwrap()]
    }

    #[test]
    fn identity_and_zero_act_as_expected() {
        let g = Grid::new(8, 1).unwrap();
        let phi = GridFunction::random(g, 2, &mut rng(1));
        let id = apply(&Kernel::identity(g, 2), &phi).unwrap();
        assert!((id.values - &phi.values).norm() < 1e-13);
        let z = apply(&Kernel::zeros(g, 2), &phi).unwrap();
        assert_eq!(z.values.norm(), 0.0);
        let other = GridFunction::zeros(Grid::new(4, 1).unwrap(), 2);
        assert!(matches!(apply(&Kernel::zeros(g, 2), &other), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn rank_one_kernel() {
        let g = Grid::new(8, 2).unwrap();
        let mut r = rng(2);
        let u = GridFunction::random(g, 1, &mut r);
        let v = GridFunction::random(g, 1, &mut r);
        let phi = GridFunction::random(g, 1, &mut r);
        let k = Kernel::from_fn(g, 1, |x, y| CMat::scalar(u.at(y, 0) * v.at(x, 0).conj()));
        // oracle: direct sums
        let w = g.weight();
        let pairing: C64 = (0..g.len()).map(|x| v.at(x, 0).conj() * phi.at(x, 0) * w).sum();
        let out = apply(&k, &phi).unwrap();
        for y in 0..g.len() {
            assert!((out.at(y, 0) - pairing * u.at(y, 0)).norm() < 1e-12);
        }
        let expect = u.norm() * v.norm();
        assert!((operator_norm(&k, 50) - expect).abs() < 1e-8 * expect);
    }

    #[test]
    fn convolution_acts_as_composition() {
        for g in grids() {
            let mut r = rng(3);
            let k1 = Kernel::random(g, 2, &mut r);
            let k2 = Kernel::random(g, 2, &mut r);
            let phi = GridFunction::random(g, 2, &mut r);
            let lhs = apply(&convolve(&k1, &k2).unwrap(), &phi).unwrap();
            let rhs = apply(&k2, &apply(&k1, &phi).unwrap()).unwrap();
            assert!((lhs.values - &rhs.values).norm() <= 1e-10 * rhs.values.norm());
            let unit = convolve(&k1, &Kernel::identity(g, 2)).unwrap();
            assert!(unit.distance(&k1) <= 1e-12 * k1.frobenius());
        }
    }

    #[test]
    fn convolution_formula_by_brute_force() {
        let g = Grid::new(4, 1).unwrap();
        let mut r = rng(4);
        let k1 = Kernel::random(g, 2, &mut r);
        let k2 = Kernel::random(g, 2, &mut r);
        let k = convolve(&k1, &k2).unwrap();
        let w = g.weight();
        for x in 0..4 {
            for z in 0..4 {
                let mut acc = DMatrix::zeros(2, 2);
                for y in 0..4 {
                    acc += k2.value(y, z) * k1.value(x, y) * C64::new(w, 0.0);
                }
                assert!((acc - k.value(x, z)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_of_constant_kernel() {
        let g = Grid::new(8, 2).unwrap();
        let c = C64::new(0.3, -1.2);
        let k = Kernel::from_fn(g, 2, |_, _| CMat::identity(2).scale(c));
        assert!((trace(&k) - c * 2.0).norm() < 1e-13);
    }

    #[test]
    fn hermitian_kernels_have_real_forms() {
        let g = Grid::new(16, 1).unwrap();
        let mut r = rng(5);
        let k = Kernel::random(g, 2, &mut r);
        let h = k.add(&involution(&k)).unwrap();
        let phi = GridFunction::random(g, 2, &mut r);
        let form = phi.inner(&apply(&h, &phi).unwrap());
        assert!(form.im.abs() <= 1e-10 * form.norm().max(1.0));
        assert_eq!(involution(&involution(&k)), k);
    }

    #[test]
    fn power_iteration_matches_svd() {
        let g = Grid::new(16, 1).unwrap();
        let k = Kernel::random(g, 2, &mut rng(6));
        let svd = k.matrix().clone().svd(false, false);
        let exact = svd.singular_values.max() * g.weight();
        let mut last = 0.0;
        for iters in [1, 5, 20, 100, 400] {
            let est = operator_norm(&k, iters);
            assert!(est >= last - 1e-15, "not monotone at {iters}");
            last = est;
        }
        assert!((last - exact).abs() <= 1e-6 * exact, "{last} vs {exact}");
        assert!((operator_norm(&Kernel::identity(g, 2), 10) - 1.0).abs() < 1e-10);
        assert_eq!(operator_norm(&Kernel::zeros(g, 2), 10), 0.0);
    }

    #[test]
    fn u1_gauge_preserves_trace_and_norm() {
        for g in grids() {
            let mut r = rng(7);
            let k = Kernel::random(g, 1, &mut r);
            let gauge = GaugeField::random(Group::U1, g.d, 2, 1.0, &mut r);
            let kg = gauge_conjugate(&k, &gauge).unwrap();
            assert!((trace(&kg) - trace(&k)).norm() <= 1e-12);
            let (a, b) = (operator_norm(&k, 400), operator_norm(&kg, 400));
            let sa = k.matrix().clone().svd(false, false).singular_values.max();
            let sb = kg.matrix().clone().svd(false, false).singular_values.max();
            assert!((sa - sb).abs() <= 1e-8 * sa);
            assert!((a - b).abs() <= 1e-4 * a);
        }
    }

    #[test]
    fn su2_gauge_preserves_trace() {
        for g in grids() {
            let mut r = rng(8);
            let k = Kernel::random(g, 2, &mut r);
            let gauge = GaugeField::random(Group::SU2, g.d, 2, 1.0, &mut r);
            let kg = gauge_conjugate(&k, &gauge).unwrap();
            assert!((trace(&kg) - trace(&k)).norm() <= 1e-12);
            let id = gauge_conjugate(&k, &GaugeField::identity(Group::SU2, g.d)).unwrap();
            assert!(id.distance(&k) < 1e-14);
        }
    }

    #[test]
    fn materialized_u1_constant_connection() {
        let alpha = 1.7;
        let a = SmoothConnection::constant(&[AlgebraElement::from_coords(Group::U1, &[alpha])]).unwrap();
        let g = Grid::new(16, 1).unwrap();
        let k = materialize(&QConnection::exact(a), 0.5, g).unwrap();
        let pts = g.points();
        for x in 0..16 {
            assert!((k.value(x, x)[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
            for y in 0..16 {
                let d = pts[x].displacement_to(&pts[y])[0];
                let expect = C64::from_polar(1.0, alpha * d);
                assert!((k.value(x, y)[(0, 0)] - expect).norm() < 1e-12);
            }
        }
        let zero = materialize(&QConnection::exact(SmoothConnection::zero(Group::SU2, 2)), 1.0, Grid::new(4, 2).unwrap()).unwrap();
        let ones = Kernel::from_fn(Grid::new(4, 2).unwrap(), 2, |_, _| CMat::identity(2)).with_hbar(1.0);
        assert!(zero.distance(&ones) < 1e-15);
    }

    #[test]
    fn binary_round_trip() {
        let g = Grid::new(4, 2).unwrap();
        let k = Kernel::random(g, 2, &mut rng(9)).with_hbar(0.25);
        let mut buf = Vec::new();
        write_kernel(&k, &mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 12 + 1 + 8 + 16 * 16 * 4 * 16);
        assert_eq!(read_kernel(buf.as_slice()).unwrap(), k);
        let dir = tempfile::tempdir().unwrap();
        let side = export_kernel(&k, dir.path(), "k").unwrap();
        assert_eq!(side.fibre, 2);
        let mut csv_buf = Vec::new();
        write_summary_csv(&[KernelSummary::of("k", &k)], &mut csv_buf).unwrap();
        assert!(String::from_utf8(csv_buf).unwrap().starts_with("label,trace_re"));
    }
}
