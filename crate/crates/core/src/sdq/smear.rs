//! Smearing a q-connection's graph into a function on `(M x M) x G`.
//!
//! `F(x, y, h) = Z^-1 exp(-dist(h, A_hbar(x, y))^2 / (2 w^2))` on the circle
//! grid `h_t = e^{2 pi i t / n_G}`, with `Z` chosen so that the Haar average
//! over the grid is one for every pair.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gauge::GaugeField;
use crate::grid::Grid;
use crate::group::{Group, GroupElement};
use crate::groupoid::check_hbar;
use crate::qconn::QConnection;
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Smeared {
    pub grid: Grid,
    pub group_n: usize,
    pub hbar: f64,
    pub width: f64,
    /// `A_hbar(x, y)` as an angle, indexed `x * N + y`.
    centres: Vec<f64>,
    norms: Vec<f64>,
    /// Indexed `(x * N + y) * n_G + t`.
    values: Vec<f64>,
}

fn wrapped(a: f64) -> f64 {
    let r = a.rem_euclid(TWO_PI);
    if r > std::f64::consts::PI {
        TWO_PI - r
    } else {
        r
    }
}

impl Smeared {
    fn pair(&self, x: usize, y: usize) -> usize {
        x * self.grid.len() + y
    }

    pub fn group_point(&self, t: usize) -> GroupElement {
        GroupElement::u1(TWO_PI * t as f64 / self.group_n as f64)
    }

    pub fn value(&self, x: usize, y: usize, t: usize) -> f64 {
        self.values[self.pair(x, y) * self.group_n + t]
    }

    pub fn centre(&self, x: usize, y: usize) -> GroupElement {
        GroupElement::u1(self.centres[self.pair(x, y)])
    }

    /// `F(x, y, h)` for arbitrary `h`, with the normalization of the grid.
    pub fn value_at(&self, x: usize, y: usize, h: &GroupElement) -> f64 {
        let p = self.pair(x, y);
        let d = wrapped(h.matrix().get(0, 0).arg() - self.centres[p]);
        (-d * d / (2.0 * self.width * self.width)).exp() / self.norms[p]
    }

    /// Haar average `sum_t F(x, y, h_t) / n_G`.
    pub fn mass(&self, x: usize, y: usize) -> f64 {
        let p = self.pair(x, y) * self.group_n;
        self.values[p..p + self.group_n].iter().sum::<f64>() / self.group_n as f64
    }

    /// Haar mass of the grid points within `radius` of the centre.
    pub fn mass_within(&self, x: usize, y: usize, radius: f64) -> f64 {
        let c = self.centres[self.pair(x, y)];
        (0..self.group_n)
            .filter(|&t| wrapped(TWO_PI * t as f64 / self.group_n as f64 - c) <= radius)
            .map(|t| self.value(x, y, t))
            .sum::<f64>()
            / self.group_n as f64
    }

    /// Largest `|mass - 1|` over all pairs.
    pub fn normalization_defect(&self) -> f64 {
        let n = self.grid.len();
        (0..n * n)
            .map(|p| (self.mass(p / n, p % n) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest mass within three widths over all pairs.
    pub fn min_concentration(&self) -> f64 {
        let n = self.grid.len();
        (0..n * n)
            .map(|p| self.mass_within(p / n, p % n, 3.0 * self.width))
            .fold(f64::INFINITY, f64::min)
    }

    /// Convolution in the product groupoid of the pair groupoid and `U1`:
    /// `(a * b)(x, z, h) = sum_y w sum_t F_a(x, y, h_t) F_b(y, z, h_t^-1 h) / n_G`.
    pub fn convolve(&self, other: &Smeared) -> Result<Vec<f64>> {
        self.grid.ensure_same(&other.grid)?;
        if self.group_n != other.group_n {
            return Err(Error::GridMismatch(format!(
                "group grids of {} and {} points",
                self.group_n, other.group_n
            )));
        }
        let n = self.grid.len();
        let ng = self.group_n;
        let w = self.grid.weight() / ng as f64;
        let mut out = vec![0.0; n * n * ng];
        out.par_chunks_mut(n * ng).enumerate().for_each(|(x, row)| {
            for z in 0..n {
                for u in 0..ng {
                    let mut acc = 0.0;
                    for y in 0..n {
                        for t in 0..ng {
                            acc += self.value(x, y, t) * other.value(y, z, (u + ng - t) % ng);
                        }
                    }
                    row[z * ng + u] = acc * w;
                }
            }
        });
        Ok(out)
    }
}

/// Smear the graph of `A_hbar` on the grid pairs.
pub fn embed_qconnection(
    q: &QConnection,
    hbar: f64,
    grid: Grid,
    group_n: usize,
    width: f64,
) -> Result<Smeared> {
    check_hbar(hbar)?;
    if q.group() != Group::U1 {
        return Err(Error::UnsupportedGroup("SU2"));
    }
    if grid.d != q.dim() {
        return Err(Error::GridMismatch(format!(
            "q-connection on T^{} but grid on T^{}",
            q.dim(),
            grid.d
        )));
    }
    let spacing = TWO_PI / group_n as f64;
    if !(width >= 2.0 * spacing) {
        return Err(Error::WidthTooSmallForGrid { width, spacing });
    }
    let pts = grid.points();
    let n = pts.len();
    let rows: Vec<(f64, f64, Vec<f64>)> = (0..n * n)
        .into_par_iter()
        .map(|p| {
            let c = q.value(&pts[p / n], &pts[p % n], hbar).matrix().get(0, 0).arg();
            let raw: Vec<f64> = (0..group_n)
                .map(|t| {
                    let d = wrapped(spacing * t as f64 - c);
                    (-d * d / (2.0 * width * width)).exp()
                })
                .collect();
            let z = raw.iter().sum::<f64>() / group_n as f64;
            (c, z, raw.into_iter().map(|v| v / z).collect())
        })
        .collect();
    let mut centres = Vec::with_capacity(n * n);
    let mut norms = Vec::with_capacity(n * n);
    let mut values = Vec::with_capacity(n * n * group_n);
    for (c, z, v) in rows {
        centres.push(c);
        norms.push(z);
        values.extend(v);
    }
    Ok(Smeared {
        grid,
        group_n,
        hbar,
        width,
        centres,
        norms,
        values,
    })
}

/// `max |F_g(x, y, h_t) - F(x, y, g(x)^-1 h_t g(y))|`, where `fg` smears the
/// gauge-acted family.
pub fn equivariance_defect(f: &Smeared, fg: &Smeared, g: &GaugeField) -> Result<f64> {
    f.grid.ensure_same(&fg.grid)?;
    let pts = f.grid.points();
    let gv: Vec<GroupElement> = pts.iter().map(|p| g.value(p)).collect();
    let n = pts.len();
    Ok((0..n * n)
        .into_par_iter()
        .map(|p| {
            let (x, y) = (p / n, p % n);
            (0..fg.group_n)
                .map(|t| {
                    let h = gv[x].inverse() * fg.group_point(t) * gv[y];
                    (fg.value(x, y, t) - f.value_at(x, y, &h)).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::SmoothConnection;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_q(dim: usize, seed: u64) -> QConnection {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        QConnection::exact(SmoothConnection::random(Group::U1, dim, 2, 1.0, &mut rng))
    }

    #[test]
    fn trivial_connection_sits_at_identity() {
        let q = QConnection::exact(SmoothConnection::zero(Group::U1, 1));
        let grid = Grid::new(8, 1).unwrap();
        let s = embed_qconnection(&q, 0.5, grid, 128, 0.2).unwrap();
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(s.centre(x, y).matrix().get(0, 0).arg(), 0.0);
                for t in 0..128 {
                    assert_eq!(s.value(x, y, t), s.value(y, x, t));
                }
            }
        }
        assert!(s.value(0, 0, 0) > s.value(0, 0, 10));
    }

    #[test]
    fn normalized_and_concentrated() {
        let grid = Grid::new(6, 2).unwrap();
        let s = embed_qconnection(&random_q(2, 4), 0.25, grid, 128, 0.15).unwrap();
        assert!(s.normalization_defect() <= 1e-10);
        assert!(s.min_concentration() >= 0.99);
    }

    #[test]
    fn gauge_equivariance() {
        let grid = Grid::new(8, 1).unwrap();
        let q = random_q(1, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = GaugeField::random(Group::U1, 1, 2, 0.8, &mut rng);
        let qg = crate::qconn::gauge_act_hbar(&g, &q).unwrap();
        let f = embed_qconnection(&q, 0.25, grid, 128, 0.2).unwrap();
        let fg = embed_qconnection(&qg, 0.25, grid, 128, 0.2).unwrap();
        assert!(equivariance_defect(&f, &fg, &g).unwrap() <= 1e-8);
    }

    #[test]
    fn convolution_preserves_mass() {
        let grid = Grid::new(4, 1).unwrap();
        let a = embed_qconnection(&random_q(1, 1), 0.5, grid, 32, 0.5).unwrap();
        let b = embed_qconnection(&random_q(1, 2), 0.5, grid, 32, 0.5).unwrap();
        let c = a.convolve(&b).unwrap();
        for pair in c.chunks(32) {
            let mass: f64 = pair.iter().sum::<f64>() / 32.0;
            assert!((mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn width_must_resolve_grid() {
        let q = random_q(1, 0);
        let grid = Grid::new(4, 1).unwrap();
        assert!(matches!(
            embed_qconnection(&q, 0.5, grid, 16, 0.1),
            Err(Error::WidthTooSmallForGrid { .. })
        ));
    }
}
