//! Uniform product grids on the unit torus.

use serde::{Deserialize, Serialize};

use crate::torus::TorusPoint;
use crate::{Error, Result};

/// The `n^d` grid `{ i / n }^d`. Point indices run with axis 0 fastest.
///
/// `d` may be 3 when a spatial grid is tensored with a circle-group grid; such
/// grids have no [`TorusPoint`] representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
    pub d: usize,
}

impl Grid {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || !(1..=3).contains(&d) {
            return Err(Error::InvalidArgument(format!(
                "grid needs n >= 1 and d in 1..=3 (got n = {n}, d = {d})"
            )));
        }
        Ok(Grid { n, d })
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight `1 / n^d`.
    pub fn weight(&self) -> f64 {
        1.0 / self.len() as f64
    }

    pub fn multi_index(&self, mut i: usize) -> [usize; 3] {
        let mut out = [0; 3];
        for slot in out.iter_mut().take(self.d) {
            *slot = i % self.n;
            i /= self.n;
        }
        out
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .take(self.d)
            .rev()
            .fold(0, |acc, &i| acc * self.n + (i % self.n))
    }

    pub fn coords(&self, i: usize) -> Vec<f64> {
        let h = 1.0 / self.n as f64;
        self.multi_index(i)[..self.d].iter().map(|&k| k as f64 * h).collect()
    }

    pub fn point(&self, i: usize) -> TorusPoint {
        assert!(self.d <= 2, "grid of dimension {} has no torus points", self.d);
        TorusPoint::new(&self.coords(i))
    }

    pub fn points(&self) -> Vec<TorusPoint> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{}^{} vs {}^{}",
                self.n, self.d, other.n, other.d
            )))
        }
    }
}
