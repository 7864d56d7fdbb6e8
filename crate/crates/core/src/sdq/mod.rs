//! Strict deformation quantization on the torus, the dual algebra and their
//! product, with the Dirac-condition and norm-continuity diagnostics.
//!
//! `Q_hbar` acts on the Fourier basis `e_j(x) = e^{2 pi i j.x}`, `j` in the
//! grid's mode box `J = [-n/2, n/2)^d`, by
//!
//! ```text
//! Q_hbar(e^{2 pi i k.x} P(p)) e_j = P(p_{j,k}) e_{j+k},   p_{j,k} = -2 pi hbar (j + k/2)
//! ```
//!
//! (the midpoint `k/2` shift is the Weyl convention and is dropped for the
//! left convention), with modes leaving `J` discarded. Real symbols give
//! self-adjoint kernels and `Q(p)` is `i hbar d/dx`, which is the sign for
//! which `(i hbar)^-1 [Q(p), Q(e_k)] = Q({p, e_k})` holds exactly.

pub mod smear;
pub mod symbol;

use nalgebra::DMatrix;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::grid::Grid;
use crate::group::Group;
use crate::groupoid::check_hbar;
use crate::linalg::{CMat, C64};
use crate::op_rep::{convolve, involution, operator_norm, Kernel, NORM_ITERS};
use crate::stats::loglog_slope;
use crate::{Error, Result};

pub use smear::{embed_qconnection, equivariance_defect, Smeared};
pub use symbol::{
    canonical_bracket, lie_poisson_bracket, poisson_bracket, product_bracket, LieSymbol, PhaseSymbol,
    ProductSymbol, Symbol,
};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Momentum sampled at the midpoint of the mode transition.
    #[default]
    Weyl,
    /// Momentum sampled at the source mode.
    Left,
}

/// `m` with `hbar = 1/m`, provided `1 <= m <= n/2`.
pub fn admissible_m(hbar: f64, n: usize) -> Result<usize> {
    let bad = Error::HbarNotAdmissible { hbar, grid: n };
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(bad);
    }
    let m = (1.0 / hbar).round();
    if m < 1.0 || m > (n / 2) as f64 || (m * hbar - 1.0).abs() > 1e-9 {
        return Err(bad);
    }
    Ok(m as usize)
}

/// Whether `hbar` is admissible on a grid with `n` points per side.
pub fn is_admissible(hbar: f64, n: usize) -> bool {
    admissible_m(hbar, n).is_ok()
}

/// `{1/m_lo, ..., 1/m_hi}` over powers of two.
pub fn dyadic_hbars(m_lo: usize, m_hi: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let mut m = m_lo.max(1);
    while m <= m_hi {
        out.push(1.0 / m as f64);
        m *= 2;
    }
    out
}

fn signed_mode(m: usize, n: usize) -> i64 {
    if m < n - n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

fn in_box(j: i64, n: usize) -> bool {
    j >= -((n / 2) as i64) && j < (n - n / 2) as i64
}

/// Unnormalized DFT along every axis of a grid-indexed buffer; `Inverse`
/// uses `e^{+2 pi i}`.
fn dft_grid(buf: &mut [C64], grid: Grid, direction: FftDirection, planner: &mut FftPlanner<f64>) {
    let n = grid.n;
    let fft = planner.plan_fft(n, direction);
    let mut line = vec![C64::new(0.0, 0.0); n];
    for axis in 0..grid.d {
        let stride = n.pow(axis as u32);
        for base in 0..grid.len() {
            if grid.multi_index(base)[axis] != 0 {
                continue;
            }
            for (i, v) in line.iter_mut().enumerate() {
                *v = buf[base + i * stride];
            }
            fft.process(&mut line);
            for (i, v) in line.iter().enumerate() {
                buf[base + i * stride] = *v;
            }
        }
    }
}

/// Sum over modes `k` of `e^{2 pi i k.y} h_k(y - x)`, given each `h_k`'s
/// Fourier weights on the mode box.
fn assemble_kernel(grid: Grid, weights: Vec<([i32; 2], Vec<C64>)>) -> Result<Kernel> {
    let n = grid.n;
    let len = grid.len();
    let mut planner = FftPlanner::new();
    let profiles: Vec<([i32; 2], Vec<C64>)> = weights
        .into_iter()
        .map(|(k, mut w)| {
            dft_grid(&mut w, grid, FftDirection::Inverse, &mut planner);
            (k, w)
        })
        .collect();
    let idx: Vec<[usize; 3]> = (0..len).map(|i| grid.multi_index(i)).collect();
    let phases: Vec<Vec<C64>> = profiles
        .iter()
        .map(|(k, _)| {
            idx.iter()
                .map(|m| {
                    let t: f64 = (0..grid.d).map(|a| k[a] as f64 * m[a] as f64).sum();
                    C64::from_polar(1.0, TWO_PI * t / n as f64)
                })
                .collect()
        })
        .collect();
    let mut data = vec![C64::new(0.0, 0.0); len * len];
    data.par_chunks_mut(len).enumerate().for_each(|(x, col)| {
        for (y, slot) in col.iter_mut().enumerate() {
            let mut diff = 0;
            let mut stride = 1;
            for a in 0..grid.d {
                diff += ((idx[y][a] + n - idx[x][a]) % n) * stride;
                stride *= n;
            }
            *slot = profiles
                .iter()
                .zip(&phases)
                .map(|((_, h), ph)| ph[y] * h[diff])
                .sum();
        }
    });
    Kernel::from_matrix(grid, 1, DMatrix::from_vec(len, len, data))
}

fn check_band(f: &PhaseSymbol, n: usize) -> Result<()> {
    let band = f.band();
    if 2 * band >= n {
        return Err(Error::BandOverflow {
            residual: band as f64,
            tolerance: ((n - 1) / 2) as f64,
        });
    }
    Ok(())
}

/// `(mode k, momentum p_{j,k}, source j, target j+k)` for every transition
/// kept in the mode box. Indices are flat grid indices.
fn transitions(
    f: &PhaseSymbol,
    hbar: f64,
    grid: Grid,
    convention: Convention,
) -> Vec<(usize, [f64; 2], usize, usize)> {
    let n = grid.n;
    let shift = match convention {
        Convention::Weyl => 0.5,
        Convention::Left => 0.0,
    };
    let mut out = Vec::new();
    for (mi, mode) in f.modes.iter().enumerate() {
        for src in 0..grid.len() {
            let m = grid.multi_index(src);
            let mut p = [0.0; 2];
            let mut dst = [0usize; 3];
            let mut ok = true;
            for a in 0..grid.d {
                let j = signed_mode(m[a], n);
                let jk = j + mode.k[a] as i64;
                ok &= in_box(jk, n);
                dst[a] = jk.rem_euclid(n as i64) as usize;
                p[a] = -TWO_PI * hbar * (j as f64 + shift * mode.k[a] as f64);
            }
            if ok {
                out.push((mi, p, src, grid.flat_index(&dst[..grid.d])));
            }
        }
    }
    out
}

pub fn quantize_pair(f: &PhaseSymbol, hbar: f64, grid: Grid) -> Result<Kernel> {
    quantize_pair_with(f, hbar, grid, Convention::Weyl)
}

/// The kernel of `Q_hbar(f)` on the `n^d` grid.
pub fn quantize_pair_with(f: &PhaseSymbol, hbar: f64, grid: Grid, convention: Convention) -> Result<Kernel> {
    if grid.d != f.dim {
        return Err(Error::GridMismatch(format!(
            "symbol on T*T^{} but grid on T^{}",
            f.dim, grid.d
        )));
    }
    admissible_m(hbar, grid.n)?;
    check_band(f, grid.n)?;
    let mut weights: Vec<([i32; 2], Vec<C64>)> = f
        .modes
        .iter()
        .map(|m| (m.k, vec![C64::new(0.0, 0.0); grid.len()]))
        .collect();
    for (mi, p, src, _) in transitions(f, hbar, grid, convention) {
        weights[mi].1[src] = f.modes[mi].profile.eval(p);
    }
    Ok(assemble_kernel(grid, weights)?.with_hbar(hbar))
}

/// Max entrywise distance between the Fourier-basis matrix of `Q_hbar(f)`
/// (recovered from its kernel by a 2d-dimensional DFT) and the symbol
/// samples `P_k(p_{j,k})` it was built from.
pub fn dequantization_error(f: &PhaseSymbol, k: &Kernel, convention: Convention) -> Result<f64> {
    let grid = k.grid;
    let hbar = k
        .hbar
        .ok_or_else(|| Error::InvalidArgument("kernel carries no hbar".into()))?;
    let len = grid.len();
    let m = k.matrix();
    let mut planner = FftPlanner::new();
    // rows: R = M E
    let mut r = DMatrix::<C64>::zeros(len, len);
    let mut buf = vec![C64::new(0.0, 0.0); len];
    for y in 0..len {
        for (x, b) in buf.iter_mut().enumerate() {
            *b = m[(y, x)];
        }
        dft_grid(&mut buf, grid, FftDirection::Inverse, &mut planner);
        for (j, b) in buf.iter().enumerate() {
            r[(y, j)] = *b;
        }
    }
    // columns: O = w^2 E^dagger R
    let w2 = grid.weight() * grid.weight();
    let mut o = DMatrix::<C64>::zeros(len, len);
    for j in 0..len {
        for (y, b) in buf.iter_mut().enumerate() {
            *b = r[(y, j)];
        }
        dft_grid(&mut buf, grid, FftDirection::Forward, &mut planner);
        for (i, b) in buf.iter().enumerate() {
            o[(i, j)] = *b * w2;
        }
    }
    let mut expect = DMatrix::<C64>::zeros(len, len);
    for (mi, p, src, dst) in transitions(f, hbar, grid, convention) {
        expect[(dst, src)] += f.modes[mi].profile.eval(p);
    }
    Ok((o - expect).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Circulant kernel with eigenvalue `lambda(j)` on `e_j`.
fn diagonal_kernel(grid: Grid, lambda: impl Fn(&[i64]) -> C64) -> Result<Kernel> {
    let weights = (0..grid.len())
        .map(|i| {
            let m = grid.multi_index(i);
            let j: Vec<i64> = m[..grid.d].iter().map(|&v| signed_mode(v, grid.n)).collect();
            lambda(&j)
        })
        .collect();
    assemble_kernel(grid, vec![([0, 0], weights)])
}

/// `Q_hbar(h)` for affine `h` on the dual of `u(1)`, as an operator on the
/// circle grid with `group_n` points: `c + c_1 mu -> c + c_1 (-i hbar d/dtheta)`.
pub fn quantize_group(h: &LieSymbol, hbar: f64, group_n: usize) -> Result<Kernel> {
    check_hbar(hbar)?;
    if h.group == Group::SU2 {
        return Err(Error::UnsupportedGroup("SU2"));
    }
    let (c0, lin) = h.affine_parts()?;
    let grid = Grid::new(group_n, 1)?;
    Ok(diagonal_kernel(grid, |j| c0 + lin[0] * hbar * j[0] as f64)?.with_hbar(hbar))
}

/// `Q_hbar(h) = c I + i hbar sum_a c_a b_a` in the defining representation.
///
/// This is a Lie-algebra homomorphism up to the factor `i hbar`, so the Dirac
/// defect of affine pairs vanishes identically.
pub fn quantize_algebraic(h: &LieSymbol, hbar: f64) -> Result<DMatrix<C64>> {
    let (c0, lin) = h.affine_parts()?;
    let g = h.group;
    let nd = g.matrix_dim();
    let mut m = CMat::identity(nd).scale(c0);
    for (a, c) in lin.iter().enumerate() {
        m = m + g.basis_matrix(a).scale(C64::new(0.0, hbar) * c);
    }
    Ok(DMatrix::from_fn(nd, nd, |i, j| m.get(i, j)))
}

/// Spectral norm of `(i hbar)^-1 [Q f, Q g] - Q {f, g}` in the defining
/// representation.
pub fn algebraic_dirac_defect(f: &LieSymbol, g: &LieSymbol, hbar: f64) -> Result<f64> {
    let qf = quantize_algebraic(f, hbar)?;
    let qg = quantize_algebraic(g, hbar)?;
    let qb = quantize_algebraic(&lie_poisson_bracket(f, g)?, hbar)?;
    let comm = (&qf * &qg - &qg * &qf) / C64::new(0.0, hbar);
    Ok((comm - qb).singular_values().max())
}

/// `Q_hbar` of a separable product symbol on the grid `n^{d+1}`, whose last
/// axis is the circle group.
pub fn quantize_product(f: &ProductSymbol, hbar: f64, grid: Grid) -> Result<Kernel> {
    let first = f
        .terms
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty product symbol".into()))?;
    let d = first.0.dim;
    if grid.d != d + 1 {
        return Err(Error::GridMismatch(format!(
            "product symbol over T^{d} x U1 needs a grid of dimension {}",
            d + 1
        )));
    }
    let base = Grid::new(grid.n, d)?;
    let mut total = DMatrix::<C64>::zeros(grid.len(), grid.len());
    for (phase, lie) in &f.terms {
        let kf = quantize_pair(phase, hbar, base)?;
        let kh = quantize_group(lie, hbar, grid.n)?;
        total += kh.matrix().kronecker(kf.matrix());
    }
    Ok(Kernel::from_matrix(grid, 1, total)?.with_hbar(hbar))
}

/// Dispatch on the symbol's base. `grid` is the full grid the kernel lives on.
pub fn quantize(f: &Symbol, hbar: f64, grid: Grid) -> Result<Kernel> {
    match f {
        Symbol::CotangentTorus(s) => quantize_pair(s, hbar, grid),
        Symbol::DualAlgebra(h) => {
            if grid.d != 1 {
                return Err(Error::GridMismatch("group grids are one-dimensional".into()));
            }
            quantize_group(h, hbar, grid.n)
        }
        Symbol::Product(p) => {
            admissible_m(hbar, grid.n)?;
            quantize_product(p, hbar, grid)
        }
    }
}

impl Symbol {
    pub fn conj(&self) -> Symbol {
        match self {
            Symbol::CotangentTorus(s) => Symbol::CotangentTorus(s.conj()),
            Symbol::DualAlgebra(h) => Symbol::DualAlgebra(LieSymbol {
                group: h.group,
                terms: h.terms.iter().map(|(e, c)| (*e, c.conj())).collect(),
            }),
            Symbol::Product(p) => Symbol::Product(ProductSymbol {
                terms: p
                    .terms
                    .iter()
                    .map(|(f, h)| {
                        (
                            f.conj(),
                            LieSymbol {
                                group: h.group,
                                terms: h.terms.iter().map(|(e, c)| (*e, c.conj())).collect(),
                            },
                        )
                    })
                    .collect(),
            }),
        }
    }

    /// Short human-readable description used as an identifier in reports.
    pub fn summary(&self) -> String {
        match self {
            Symbol::CotangentTorus(s) => format!(
                "T*T^{}:{}modes:deg{}:band{}",
                s.dim,
                s.modes.len(),
                s.degree(),
                s.band()
            ),
            Symbol::DualAlgebra(h) => format!("{}*:{}terms:deg{}", h.group, h.terms.len(), h.degree()),
            Symbol::Product(p) => format!("product:{}terms", p.terms.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub grid: Grid,
    pub hbars: Vec<f64>,
    /// `||(i hbar)^-1 [Q f, Q g] - Q {f, g}||` per hbar.
    pub defects: Vec<f64>,
    /// The defect compressed to the interior modes, whose images under both
    /// operators stay inside the mode box. Truncation at the box edge is the
    /// only obstruction for pairs that commute classically and quantum
    /// mechanically alike, such as two `x`-only symbols.
    pub interior_defects: Vec<f64>,
    /// `max(||Q(f)^* - Q(f^*)||, ||Q(g)^* - Q(g^*)||)` per hbar.
    pub adjoint_defects: Vec<f64>,
    pub fitted_slope: Option<f64>,
    pub symbol_ids: (String, String),
}

impl DefectReport {
    pub fn max_defect(&self) -> f64 {
        self.defects.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_interior_defect(&self) -> f64 {
        self.interior_defects.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_adjoint_defect(&self) -> f64 {
        self.adjoint_defects.iter().cloned().fold(0.0, f64::max)
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["hbar", "defect", "interior_defect", "adjoint_defect"])?;
        for i in 0..self.hbars.len() {
            out.write_record([
                format!("{:e}", self.hbars[i]),
                format!("{:e}", self.defects[i]),
                format!("{:e}", self.interior_defects[i]),
                format!("{:e}", self.adjoint_defects[i]),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn adjoint_defect(f: &Symbol, kf: &Kernel, hbar: f64, grid: Grid) -> Result<f64> {
    let kstar = quantize(&f.conj(), hbar, grid)?;
    Ok(operator_norm(&involution(kf).sub(&kstar)?, NORM_ITERS))
}

/// Largest spatial `|k|_inf` and the number of spatial axes.
fn spatial_band(f: &Symbol) -> (usize, usize) {
    match f {
        Symbol::CotangentTorus(s) => (s.band(), s.dim),
        Symbol::DualAlgebra(_) => (0, 0),
        Symbol::Product(p) => (
            p.terms.iter().map(|t| t.0.band()).max().unwrap_or(0),
            p.terms.first().map_or(0, |t| t.0.dim),
        ),
    }
}

/// Projection onto the modes `|j_mu| + margin < n/2` of the first `axes` axes.
fn interior_projection(grid: Grid, axes: usize, margin: usize) -> Result<Kernel> {
    let half = (grid.n / 2) as i64;
    diagonal_kernel(grid, |j| {
        let inside = j[..axes].iter().all(|v| v.abs() + (margin as i64) < half);
        C64::new(if inside { 1.0 } else { 0.0 }, 0.0)
    })
}

/// The Dirac-condition defect over an hbar sweep, run in parallel over hbar.
pub fn dirac_defect(f: &Symbol, g: &Symbol, hbars: &[f64], grid: Grid) -> Result<DefectReport> {
    let bracket = poisson_bracket(f, g)?;
    let (bf, axes) = spatial_band(f);
    let proj = interior_projection(grid, axes, bf + spatial_band(g).0)?;
    let rows = hbars
        .par_iter()
        .map(|&hbar| -> Result<(f64, f64, f64)> {
            let kf = quantize(f, hbar, grid)?;
            let kg = quantize(g, hbar, grid)?;
            let kb = quantize(&bracket, hbar, grid)?;
            // convolve(a, b) acts as apply(b) after apply(a)
            let fg = convolve(&kg, &kf)?;
            let gf = convolve(&kf, &kg)?;
            let comm = fg.sub(&gf)?.scale(C64::new(0.0, -1.0 / hbar));
            let d = comm.sub(&kb)?;
            let interior = operator_norm(&convolve(&convolve(&proj, &d)?, &proj)?, NORM_ITERS);
            let defect = operator_norm(&d, NORM_ITERS);
            let adj = adjoint_defect(f, &kf, hbar, grid)?.max(adjoint_defect(g, &kg, hbar, grid)?);
            Ok((defect, interior, adj))
        })
        .collect::<Result<Vec<_>>>()?;
    let defects: Vec<f64> = rows.iter().map(|r| r.0).collect();
    Ok(DefectReport {
        grid,
        hbars: hbars.to_vec(),
        fitted_slope: loglog_slope(hbars, &defects),
        interior_defects: rows.iter().map(|r| r.1).collect(),
        adjoint_defects: rows.iter().map(|r| r.2).collect(),
        defects,
        symbol_ids: (f.summary(), g.summary()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub grid: Grid,
    pub hbars: Vec<f64>,
    pub norms: Vec<f64>,
    /// `||f||_inf` on the sampled phase space.
    pub sup_norm: f64,
    /// `| ||Q_hbar f|| - ||f||_inf |` per hbar.
    pub defects: Vec<f64>,
    pub fitted_slope: Option<f64>,
    pub symbol_id: String,
}

impl NormReport {
    /// Defect at the smallest hbar of the sweep.
    pub fn final_defect(&self) -> f64 {
        self.hbars
            .iter()
            .zip(&self.defects)
            .min_by(|a, b| a.0.total_cmp(b.0))
            .map(|(_, d)| *d)
            .unwrap_or(f64::NAN)
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["hbar", "norm", "sup_norm", "defect"])?;
        for i in 0..self.hbars.len() {
            out.write_record([
                format!("{:e}", self.hbars[i]),
                format!("{:e}", self.norms[i]),
                format!("{:e}", self.sup_norm),
                format!("{:e}", self.defects[i]),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `||Q_hbar f||` against the sup norm of `f` over the position grid and a
/// momentum lattice fine enough to resolve the smallest hbar.
pub fn norm_continuity(f: &PhaseSymbol, hbars: &[f64], grid: Grid) -> Result<NormReport> {
    let min_hbar = hbars.iter().cloned().fold(f64::INFINITY, f64::min);
    if !min_hbar.is_finite() {
        return Err(Error::InvalidArgument("empty hbar list".into()));
    }
    let p_max = std::f64::consts::PI * grid.n as f64 * min_hbar;
    let sup = f.sup_norm(grid.n, p_max, TWO_PI * min_hbar / 4.0);
    let norms = hbars
        .par_iter()
        .map(|&h| Ok(operator_norm(&quantize_pair(f, h, grid)?, NORM_ITERS)))
        .collect::<Result<Vec<f64>>>()?;
    let defects: Vec<f64> = norms.iter().map(|n| (n - sup).abs()).collect();
    Ok(NormReport {
        grid,
        hbars: hbars.to_vec(),
        fitted_slope: loglog_slope(hbars, &defects),
        sup_norm: sup,
        norms,
        defects,
        symbol_id: Symbol::CotangentTorus(f.clone()).summary(),
    })
}

/// The fixed five-symbol suite used for norm continuity on `T*T^d`.
pub fn norm_suite(dim: usize) -> Vec<PhaseSymbol> {
    let g = PhaseSymbol::gaussian(dim, 2.0);
    let cos = PhaseSymbol::cos_mode(dim, [1, 0]);
    vec![
        PhaseSymbol::constant(dim, 1.0),
        PhaseSymbol::x_mode(dim, [1, 0], C64::new(1.0, 0.0)),
        g.clone(),
        cos.mul(&g),
        PhaseSymbol::constant(dim, 1.0)
            .add(&cos.scale(C64::new(0.5, 0.0)))
            .mul(&g),
    ]
}

/// Generic Dirac pair on `T*T^d`: band-limited in `x`, polynomial of degree
/// at most two in `p`, under a Gaussian momentum envelope.
pub fn generic_pair(dim: usize) -> (PhaseSymbol, PhaseSymbol) {
    let env = PhaseSymbol::gaussian(dim, 2.0);
    let p0 = PhaseSymbol::momentum(dim, 0);
    let one = PhaseSymbol::constant(dim, 1.0);
    let f = PhaseSymbol::cos_mode(dim, [1, 0])
        .add(&PhaseSymbol::sin_mode(dim, [2, 0]).scale(C64::new(0.3, 0.0)))
        .mul(&one.add(&p0.scale(C64::new(0.5, 0.0))))
        .mul(&env);
    let g = PhaseSymbol::sin_mode(dim, [1, 0])
        .mul(&p0.mul(&p0).scale(C64::new(0.25, 0.0)).add(&one))
        .mul(&env);
    (f, g)
}

/// The exactly quantized pair `(p_0, cos(2 pi x_0))`.
pub fn exact_pair(dim: usize) -> (PhaseSymbol, PhaseSymbol) {
    (PhaseSymbol::momentum(dim, 0), PhaseSymbol::cos_mode(dim, [1, 0]))
}
