//! Band-limited Lie-algebra-valued fields on `T^d`.
//!
//! A field is `f(x) = sum_a f_a(x) b_a` with real coordinate functions
//! `f_a(x) = Re sum_k c_{a,k} e^{2 pi i k.x}` over a finite mode list. The
//! coefficient table is kept conjugate-symmetric, so the real part only
//! removes round-off.

use std::f64::consts::PI;

use rand::Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::group::{AlgebraElement, Group, GroupElement};
use crate::linalg::{CMat, C64, ZERO};
use crate::{Error, Result};

/// `e^{2 pi i k x}` for `k = -band..=band` along each axis of a point.
pub(crate) struct PhaseTable {
    band: i32,
    axes: [Vec<C64>; 2],
}

impl PhaseTable {
    pub(crate) fn new(x: [f64; 2], dim: usize, band: usize) -> Self {
        let band = band as i32;
        let axis = |t: f64| {
            let w = C64::from_polar(1.0, 2.0 * PI * t);
            let winv = w.conj();
            let mut v = vec![ZERO; (2 * band + 1) as usize];
            v[band as usize] = C64::new(1.0, 0.0);
            for k in 1..=band as usize {
                v[band as usize + k] = v[band as usize + k - 1] * w;
                v[band as usize - k] = v[band as usize - k + 1] * winv;
            }
            v
        };
        let ax = axis(x[0]);
        let ay = if dim == 2 { axis(x[1]) } else { Vec::new() };
        PhaseTable {
            band,
            axes: [ax, ay],
        }
    }

    #[inline]
    pub(crate) fn phase(&self, k: [i32; 2]) -> C64 {
        let px = self.axes[0][(k[0] + self.band) as usize];
        if self.axes[1].is_empty() {
            px
        } else {
            px * self.axes[1][(k[1] + self.band) as usize]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "FieldTable", try_from = "FieldTable")]
pub struct LieField {
    group: Group,
    dim: usize,
    band: usize,
    modes: Vec<[i32; 2]>,
    /// `coeffs[m * algebra_dim + a]`
    coeffs: Vec<C64>,
}

/// Serialized form: one row per stored mode.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldTable {
    pub group: Group,
    pub dim: usize,
    pub band: usize,
    pub modes: Vec<ModeRow>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModeRow {
    pub k: Vec<i32>,
    /// One `[re, im]` pair per algebra basis element.
    pub coeffs: Vec<[f64; 2]>,
}

impl From<LieField> for FieldTable {
    fn from(f: LieField) -> Self {
        let ad = f.group.algebra_dim();
        FieldTable {
            group: f.group,
            dim: f.dim,
            band: f.band,
            modes: f
                .modes
                .iter()
                .enumerate()
                .map(|(m, k)| ModeRow {
                    k: k[..f.dim].to_vec(),
                    coeffs: f.coeffs[m * ad..(m + 1) * ad]
                        .iter()
                        .map(|z| [z.re, z.im])
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<FieldTable> for LieField {
    type Error = Error;

    fn try_from(t: FieldTable) -> Result<Self> {
        let ad = t.group.algebra_dim();
        let mut entries = Vec::with_capacity(t.modes.len());
        for row in t.modes {
            if row.k.len() != t.dim || row.coeffs.len() != ad {
                return Err(Error::InvalidArgument(
                    "mode row does not match field dimension or algebra".into(),
                ));
            }
            let mut k = [0; 2];
            k[..t.dim].copy_from_slice(&row.k);
            if k.iter().any(|c| c.unsigned_abs() as usize > t.band) {
                return Err(Error::InvalidArgument(format!(
                    "mode {k:?} exceeds declared band {}",
                    t.band
                )));
            }
            entries.push((k, row.coeffs.iter().map(|p| C64::new(p[0], p[1])).collect()));
        }
        let mut f = LieField::from_modes(t.group, t.dim, entries)?;
        f.band = f.band.max(t.band);
        Ok(f)
    }
}

impl LieField {
    pub fn zero(group: Group, dim: usize) -> Self {
        LieField {
            group,
            dim,
            band: 0,
            modes: Vec::new(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(x: &AlgebraElement, dim: usize) -> Self {
        let coords: Vec<C64> = x.coords().iter().map(|&c| C64::new(c, 0.0)).collect();
        Self::from_modes(x.group(), dim, vec![([0, 0], coords)]).expect("constant field")
    }

    /// Builds a field from `(mode, per-basis coefficient)` entries; repeated
    /// modes are summed and the table is made conjugate-symmetric.
    pub fn from_modes(group: Group, dim: usize, entries: Vec<([i32; 2], Vec<C64>)>) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::InvalidArgument(format!("field dimension {dim}")));
        }
        let ad = group.algebra_dim();
        let mut table: std::collections::BTreeMap<[i32; 2], Vec<C64>> = Default::default();
        for (mut k, c) in entries {
            if c.len() != ad {
                return Err(Error::InvalidArgument(format!(
                    "expected {ad} coefficients per mode, got {}",
                    c.len()
                )));
            }
            if dim == 1 {
                k[1] = 0;
            }
            // split c e^{ikx} into its conjugate-symmetric real part
            let neg = [-k[0], -k[1]];
            for (key, val) in [(k, c.clone()), (neg, c.iter().map(|z| z.conj()).collect())] {
                let slot = table.entry(key).or_insert_with(|| vec![ZERO; ad]);
                for (s, v) in slot.iter_mut().zip(val) {
                    *s += 0.5 * v;
                }
            }
        }
        let mut modes = Vec::new();
        let mut coeffs = Vec::new();
        let mut band = 0usize;
        for (k, c) in table {
            if c.iter().all(|z| z.norm() == 0.0) {
                continue;
            }
            band = band.max(k[0].unsigned_abs() as usize).max(k[1].unsigned_abs() as usize);
            modes.push(k);
            coeffs.extend(c);
        }
        Ok(LieField {
            group,
            dim,
            band,
            modes,
            coeffs,
        })
    }

    /// A random real field with modes `|k|_inf <= band` and coefficients of
    /// size `amplitude / (1 + |k|^2)`.
    pub fn random<R: Rng + ?Sized>(
        group: Group,
        dim: usize,
        band: usize,
        amplitude: f64,
        rng: &mut R,
    ) -> Self {
        let ad = group.algebra_dim();
        let b = band as i32;
        let mut entries = Vec::new();
        let ky_range = if dim == 2 { -b..=b } else { 0..=0 };
        for ky in ky_range {
            for kx in -b..=b {
                let decay = amplitude / (1.0 + (kx * kx + ky * ky) as f64);
                let c = (0..ad)
                    .map(|_| {
                        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * decay
                    })
                    .collect();
                entries.push(([kx, ky], c));
            }
        }
        Self::from_modes(group, dim, entries).expect("valid random field")
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> impl Iterator<Item = ([i32; 2], &[C64])> {
        let ad = self.group.algebra_dim();
        self.modes
            .iter()
            .enumerate()
            .map(move |(m, k)| (*k, &self.coeffs[m * ad..(m + 1) * ad]))
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// Coordinates `f_a(x)` with a caller-provided phase table.
    pub(crate) fn coords_with(&self, table: &PhaseTable, out: &mut [f64; 3]) {
        let ad = self.group.algebra_dim();
        let mut acc = [ZERO; 3];
        for (m, k) in self.modes.iter().enumerate() {
            let ph = table.phase(*k);
            for a in 0..ad {
                acc[a] += self.coeffs[m * ad + a] * ph;
            }
        }
        for a in 0..ad {
            out[a] = acc[a].re;
        }
    }

    pub fn coords_at(&self, x: [f64; 2]) -> [f64; 3] {
        let mut out = [0.0; 3];
        if !self.is_zero() {
            self.coords_with(&PhaseTable::new(x, self.dim, self.band), &mut out);
        }
        out
    }

    pub fn value(&self, x: [f64; 2]) -> AlgebraElement {
        let c = self.coords_at(x);
        AlgebraElement::from_coords(self.group, &c[..self.group.algebra_dim()])
    }

    /// Partial derivative along axis `mu`.
    pub fn derivative(&self, mu: usize) -> LieField {
        let mut out = self.clone();
        let ad = self.group.algebra_dim();
        for (m, k) in self.modes.iter().enumerate() {
            let factor = C64::new(0.0, 2.0 * PI * k[mu] as f64);
            for a in 0..ad {
                out.coeffs[m * ad + a] *= factor;
            }
        }
        out.prune()
    }

    /// Exact average `int_0^1 f(x + t delta) dt` of the coordinates.
    pub fn segment_average(&self, x: [f64; 2], delta: [f64; 2]) -> [f64; 3] {
        let ad = self.group.algebra_dim();
        let table = PhaseTable::new(x, self.dim, self.band);
        let mut acc = [ZERO; 3];
        for (m, k) in self.modes.iter().enumerate() {
            let z = 2.0 * PI * (k[0] as f64 * delta[0] + k[1] as f64 * delta[1]);
            // (e^{iz} - 1) / (iz), with its Taylor series near zero
            let phi = if z.abs() < 1e-4 {
                C64::new(1.0 - z * z / 6.0, z / 2.0 - z * z * z / 24.0)
            } else {
                (C64::from_polar(1.0, z) - 1.0) / C64::new(0.0, z)
            };
            let w = table.phase(*k) * phi;
            for a in 0..ad {
                acc[a] += self.coeffs[m * ad + a] * w;
            }
        }
        let mut out = [0.0; 3];
        for a in 0..ad {
            out[a] = acc[a].re;
        }
        out
    }

    pub fn add(&self, other: &LieField) -> Result<LieField> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::InvalidArgument("fields on different tori".into()));
        }
        let entries = self.modes().chain(other.modes()).map(|(k, c)| (k, c.to_vec())).collect();
        // entries are already symmetric, so from_modes reproduces them exactly
        LieField::from_modes(self.group, self.dim, entries)
    }

    pub fn scale(&self, s: f64) -> LieField {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= s;
        }
        out.prune()
    }

    /// Pointwise `Ad_g f = g f g^{-1}` for a constant group element.
    pub fn conjugate_by(&self, g: &GroupElement) -> LieField {
        let ad = self.group.algebra_dim();
        let images: Vec<Vec<f64>> = self
            .group
            .basis()
            .iter()
            .map(|b| b.conjugate_by(g).coords())
            .collect();
        let mut out = self.clone();
        for m in 0..self.modes.len() {
            let old = &self.coeffs[m * ad..(m + 1) * ad];
            for b in 0..ad {
                out.coeffs[m * ad + b] = (0..ad).map(|a| old[a] * images[a][b]).sum();
            }
        }
        out
    }

    /// `x -> f(x + offset)`.
    pub fn translate(&self, offset: [f64; 2]) -> LieField {
        let ad = self.group.algebra_dim();
        let mut out = self.clone();
        for (m, k) in self.modes.iter().enumerate() {
            let ph = C64::from_polar(
                1.0,
                2.0 * PI * (k[0] as f64 * offset[0] + k[1] as f64 * offset[1]),
            );
            for a in 0..ad {
                out.coeffs[m * ad + a] *= ph;
            }
        }
        out
    }

    fn prune(mut self) -> LieField {
        let ad = self.group.algebra_dim();
        let mut modes = Vec::new();
        let mut coeffs = Vec::new();
        for (m, k) in self.modes.iter().enumerate() {
            let c = &self.coeffs[m * ad..(m + 1) * ad];
            if c.iter().any(|z| z.norm() != 0.0) {
                modes.push(*k);
                coeffs.extend_from_slice(c);
            }
        }
        self.band = modes
            .iter()
            .map(|k| k[0].unsigned_abs().max(k[1].unsigned_abs()) as usize)
            .max()
            .unwrap_or(0);
        self.modes = modes;
        self.coeffs = coeffs;
        self
    }

    /// Largest coordinate magnitude over a `samples^d` grid.
    pub fn max_abs_on_grid(&self, samples: usize) -> f64 {
        let pts = grid_points(self.dim, samples);
        pts.iter()
            .flat_map(|x| self.coords_at(*x))
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn grid_points(dim: usize, m: usize) -> Vec<[f64; 2]> {
    let h = 1.0 / m as f64;
    if dim == 1 {
        (0..m).map(|i| [i as f64 * h, 0.0]).collect()
    } else {
        (0..m * m).map(|i| [(i % m) as f64 * h, (i / m) as f64 * h]).collect()
    }
}

/// Result of fitting a sampled field to a Fourier band.
#[derive(Clone, Debug)]
pub struct Fit {
    pub field: LieField,
    /// Largest coordinate error at the cell midpoints of the sampling grid.
    pub residual: f64,
}

/// Fits `sample(x)` (algebra coordinates) to modes `|k|_inf <= band` by FFT on
/// a grid of `max(4 band + 4, 16)` points per axis.
pub fn fit<F>(group: Group, dim: usize, band: usize, sample: F) -> Fit
where
    F: Fn([f64; 2]) -> [f64; 3] + Sync,
{
    use rayon::prelude::*;

    let ad = group.algebra_dim();
    let m = (4 * band + 4).max(16);
    let pts = grid_points(dim, m);
    let values: Vec<[f64; 3]> = pts.par_iter().map(|x| sample(*x)).collect();
    let total = pts.len();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    let mut per_basis = Vec::with_capacity(ad);
    for a in 0..ad {
        let mut buf: Vec<C64> = values.iter().map(|v| C64::new(v[a], 0.0)).collect();
        // rows (axis 0 fastest), then columns
        for row in buf.chunks_mut(m) {
            fft.process(row);
        }
        if dim == 2 {
            let mut col = vec![ZERO; m];
            for i in 0..m {
                for j in 0..m {
                    col[j] = buf[j * m + i];
                }
                fft.process(&mut col);
                for j in 0..m {
                    buf[j * m + i] = col[j];
                }
            }
        }
        for z in buf.iter_mut() {
            *z /= total as f64;
        }
        per_basis.push(buf);
    }
    let b = band as i32;
    let idx = |k: i32| k.rem_euclid(m as i32) as usize;
    let mut entries = Vec::new();
    let ky_range = if dim == 2 { -b..=b } else { 0..=0 };
    for ky in ky_range {
        for kx in -b..=b {
            let flat = idx(kx) + if dim == 2 { idx(ky) * m } else { 0 };
            let c: Vec<C64> = (0..ad).map(|a| per_basis[a][flat]).collect();
            entries.push(([kx, ky], c));
        }
    }
    let field = LieField::from_modes(group, dim, entries).expect("fit entries are well formed");
    let h = 0.5 / m as f64;
    let residual = pts
        .par_iter()
        .map(|x| {
            let mid = [x[0] + h, if dim == 2 { x[1] + h } else { 0.0 }];
            let exact = sample(mid);
            let got = field.coords_at(mid);
            (0..ad).map(|a| (exact[a] - got[a]).abs()).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Fit { field, residual }
}

/// Evaluates `sum_a c_a b_a` as a matrix.
pub(crate) fn coords_matrix(group: Group, c: &[f64; 3]) -> CMat {
    let mut m = CMat::zeros(group.matrix_dim());
    for a in 0..group.algebra_dim() {
        m += group.basis_matrix(a).scale_re(c[a]);
    }
    m
}

/// Coordinates `-tr(M b_a)` of the anti-Hermitian part of `m`.
pub(crate) fn matrix_coords(group: Group, m: &CMat) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (a, slot) in out.iter_mut().enumerate().take(group.algebra_dim()) {
        *slot = -(*m * group.basis_matrix(a)).trace().re;
    }
    out
}
