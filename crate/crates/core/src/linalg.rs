//! Fixed-capacity complex matrices of order 1 or 2.
//!
//! Every group in this crate lives in its defining representation of
//! dimension at most two, so holonomy products run on a `Copy` type with no
//! heap traffic.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Row-major `n x n` complex matrix with `n` in `{1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat {
    n: usize,
    a: [C64; 4],
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        assert!(n == 1 || n == 2, "matrix order must be 1 or 2, got {n}");
        CMat { n, a: [ZERO; 4] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn scalar(z: C64) -> Self {
        let mut m = Self::zeros(1);
        m.a[0] = z;
        m
    }

    pub fn from_rows2(r0: [C64; 2], r1: [C64; 2]) -> Self {
        CMat {
            n: 2,
            a: [r0[0], r0[1], r1[0], r1[1]],
        }
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be 1 or 4.
    pub fn from_row_major(entries: &[C64]) -> Self {
        match entries.len() {
            1 => Self::scalar(entries[0]),
            4 => Self::from_rows2([entries[0], entries[1]], [entries[2], entries[3]]),
            len => panic!("expected 1 or 4 entries, got {len}"),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.a[i * self.n + j] = z;
    }

    pub fn entries(&self) -> &[C64] {
        &self.a[..self.n * self.n]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(j, i).conj());
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn det(&self) -> C64 {
        if self.n == 1 {
            self.a[0]
        } else {
            self.a[0] * self.a[3] - self.a[1] * self.a[2]
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for z in m.a.iter_mut() {
            *z *= s;
        }
        m
    }

    pub fn scale_re(&self, s: f64) -> Self {
        let mut m = *self;
        for z in m.a.iter_mut() {
            *z *= s;
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        if self.n == 1 {
            return self.a[0].norm();
        }
        // Eigenvalues of the Hermitian matrix A^dagger A in closed form.
        let h = self.adjoint() * *self;
        let tr = h.get(0, 0).re + h.get(1, 1).re;
        let det = (h.get(0, 0).re * h.get(1, 1).re - h.get(0, 1).norm_sqr()).max(0.0);
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        (tr / 2.0 + disc).max(0.0).sqrt()
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &CMat) -> CMat {
        *self * *other - *other * *self
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn distance(&self, other: &CMat) -> f64 {
        (*self - *other).frobenius_norm()
    }
}

impl Mul for CMat {
    type Output = CMat;

    #[inline]
    fn mul(self, rhs: CMat) -> CMat {
        debug_assert_eq!(self.n, rhs.n);
        if self.n == 1 {
            return CMat::scalar(self.a[0] * rhs.a[0]);
        }
        let (a, b) = (&self.a, &rhs.a);
        CMat {
            n: 2,
            a: [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
        }
    }
}

impl Add for CMat {
    type Output = CMat;

    #[inline]
    fn add(mut self, rhs: CMat) -> CMat {
        debug_assert_eq!(self.n, rhs.n);
        for (x, y) in self.a.iter_mut().zip(rhs.a.iter()) {
            *x += *y;
        }
        self
    }
}

impl AddAssign for CMat {
    #[inline]
    fn add_assign(&mut self, rhs: CMat) {
        *self = *self + rhs;
    }
}

impl Sub for CMat {
    type Output = CMat;

    #[inline]
    fn sub(mut self, rhs: CMat) -> CMat {
        debug_assert_eq!(self.n, rhs.n);
        for (x, y) in self.a.iter_mut().zip(rhs.a.iter()) {
            *x -= *y;
        }
        self
    }
}

impl Neg for CMat {
    type Output = CMat;

    fn neg(self) -> CMat {
        self.scale_re(-1.0)
    }
}

/// Serialized as a list of `[re, im]` pairs in row-major order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixEntries(pub Vec<[f64; 2]>);

impl From<&CMat> for MatrixEntries {
    fn from(m: &CMat) -> Self {
        MatrixEntries(m.entries().iter().map(|z| [z.re, z.im]).collect())
    }
}

impl TryFrom<&MatrixEntries> for CMat {
    type Error = crate::Error;

    fn try_from(e: &MatrixEntries) -> crate::Result<Self> {
        let zs: Vec<C64> = e.0.iter().map(|p| C64::new(p[0], p[1])).collect();
        match zs.len() {
            1 | 4 => Ok(CMat::from_row_major(&zs)),
            n => Err(crate::Error::InvalidArgument(format!(
                "matrix with {n} entries; expected 1 or 4"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_norm_matches_diagonal_entries() {
        let m = CMat::from_rows2([C64::new(3.0, 0.0), ZERO], [ZERO, C64::new(0.0, -5.0)]);
        assert!((m.operator_norm() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norm_of_rank_one() {
        // u v^dagger with |u| = sqrt(2), |v| = sqrt(5)
        let u = [ONE, I];
        let v = [C64::new(1.0, 0.0), C64::new(2.0, 0.0)];
        let m = CMat::from_rows2(
            [u[0] * v[0].conj(), u[0] * v[1].conj()],
            [u[1] * v[0].conj(), u[1] * v[1].conj()],
        );
        assert!((m.operator_norm() - (2.0f64 * 5.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn determinant_and_trace() {
        let m = CMat::from_rows2([ONE, I], [-I, C64::new(2.0, 0.0)]);
        assert_eq!(m.trace(), C64::new(3.0, 0.0));
        assert_eq!(m.det(), C64::new(2.0, 0.0) + I * I);
    }
}
