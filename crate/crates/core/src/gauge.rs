//! Smooth gauge fields `g: T^d -> G`, stored as finite products
//! `g(x) = C_1 exp(Y_1(x)) C_2 exp(Y_2(x)) ...` of constants and exponentials of
//! band-limited algebra fields. Products of gauge fields stay exact this way.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::field::{coords_matrix, matrix_coords, LieField};
use crate::group::{exp_derivative, exp_matrix, AlgebraElement, Group, GroupElement};
use crate::holonomy::SmoothConnection;
use crate::linalg::CMat;
use crate::torus::{TangentVector, TorusPoint};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeFactor {
    pub constant: GroupElement,
    pub exponent: LieField,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeField {
    group: Group,
    dim: usize,
    factors: Vec<GaugeFactor>,
}

impl GaugeField {
    pub fn identity(group: Group, dim: usize) -> Self {
        GaugeField {
            group,
            dim,
            factors: Vec::new(),
        }
    }

    pub fn constant(c: GroupElement, dim: usize) -> Self {
        Self::factor(c, LieField::zero(c.group(), dim))
    }

    /// `x -> exp(Y(x))`.
    pub fn exp_of(y: LieField) -> Self {
        let id = y.group().identity();
        Self::factor(id, y)
    }

    /// `x -> c exp(Y(x))`.
    pub fn factor(c: GroupElement, y: LieField) -> Self {
        GaugeField {
            group: y.group(),
            dim: y.dim(),
            factors: vec![GaugeFactor {
                constant: c,
                exponent: y,
            }],
        }
    }

    /// `exp(Y)` for a random band-limited `Y` of the given amplitude.
    pub fn random<R: Rng + ?Sized>(
        group: Group,
        dim: usize,
        band: usize,
        amplitude: f64,
        rng: &mut R,
    ) -> Self {
        Self::exp_of(LieField::random(group, dim, band, amplitude, rng))
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[GaugeFactor] {
        &self.factors
    }

    /// Largest Fourier band among the exponents.
    pub fn band(&self) -> usize {
        self.factors.iter().map(|f| f.exponent.band()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.factors.iter().all(|f| f.exponent.is_zero())
    }

    /// Pointwise product `x -> self(x) other(x)`.
    pub fn compose(&self, other: &GaugeField) -> Result<GaugeField> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(GaugeField {
            group: self.group,
            dim: self.dim,
            factors,
        })
    }

    fn factor_values(&self, x: [f64; 2]) -> Vec<CMat> {
        self.factors
            .iter()
            .map(|f| {
                let y = coords_matrix(self.group, &f.exponent.coords_at(x));
                *f.constant.matrix() * exp_matrix(self.group, &y)
            })
            .collect()
    }

    pub(crate) fn matrix_at(&self, x: [f64; 2]) -> CMat {
        self.factor_values(x)
            .into_iter()
            .fold(CMat::identity(self.group.matrix_dim()), |acc, m| acc * m)
    }

    pub fn value(&self, x: &TorusPoint) -> GroupElement {
        GroupElement::from_matrix_unchecked(self.group, self.matrix_at(x.raw()))
    }

    pub(crate) fn value_raw(&self, x: [f64; 2]) -> GroupElement {
        GroupElement::from_matrix_unchecked(self.group, self.matrix_at(x))
    }

    /// `d/dx_mu g(x)` by the product rule.
    pub(crate) fn derivative_at(&self, x: [f64; 2], mu: usize) -> CMat {
        let n = self.group.matrix_dim();
        let vals = self.factor_values(x);
        let mut total = CMat::zeros(n);
        for (i, f) in self.factors.iter().enumerate() {
            let dy = f.exponent.derivative(mu);
            if dy.is_zero() {
                continue;
            }
            let z = AlgebraElement::from_matrix_unchecked(
                self.group,
                coords_matrix(self.group, &f.exponent.coords_at(x)),
            );
            let zdot = AlgebraElement::from_matrix_unchecked(
                self.group,
                coords_matrix(self.group, &dy.coords_at(x)),
            );
            let d_i = *f.constant.matrix() * exp_derivative(&z, &zdot);
            let left = vals[..i].iter().fold(CMat::identity(n), |acc, m| acc * *m);
            let right = vals[i + 1..].iter().fold(CMat::identity(n), |acc, m| acc * *m);
            total += left * d_i * right;
        }
        total
    }

    /// `d/dx_mu (g^{-1})(x) = -g^{-1} (d_mu g) g^{-1}`.
    pub(crate) fn inverse_derivative_at(&self, x: [f64; 2], mu: usize) -> CMat {
        let ginv = self.matrix_at(x).adjoint();
        -(ginv * self.derivative_at(x, mu) * ginv)
    }

    /// The transformed connection evaluated exactly at one tangent vector:
    /// `g A(x, V) g^{-1} + g <d g^{-1}, V>`.
    pub fn act_on_connection_at(
        &self,
        a: &SmoothConnection,
        v: &TangentVector,
    ) -> Result<AlgebraElement> {
        if a.group() != self.group {
            return Err(Error::GroupMismatch);
        }
        let x = v.base.raw();
        let value = a.evaluate(&v.base, v)?;
        let g = self.matrix_at(x);
        let mut m = g * *value.matrix() * g.adjoint();
        for (mu, &vm) in v.components().iter().enumerate() {
            if vm != 0.0 {
                m += (g * self.inverse_derivative_at(x, mu)).scale_re(vm);
            }
        }
        Ok(AlgebraElement::from_matrix_unchecked(self.group, m))
    }

    /// Pointwise coordinates of the transformed component `mu`.
    pub(crate) fn transformed_component(&self, a: &LieField, x: [f64; 2], mu: usize) -> [f64; 3] {
        let g = self.matrix_at(x);
        let am = coords_matrix(self.group, &a.coords_at(x));
        let m = g * am * g.adjoint() + g * self.inverse_derivative_at(x, mu);
        matrix_coords(self.group, &m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::haar_sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn values_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = GaugeField::random(Group::SU2, 2, 2, 1.0, &mut rng)
            .compose(&GaugeField::constant(haar_sample(Group::SU2, 1, 1)[0], 2))
            .unwrap();
        for x in [[0.1, 0.2], [0.7, 0.35], [0.99, 0.5]] {
            let m = g.matrix_at(x);
            assert!((m.adjoint() * m).distance(&CMat::identity(2)) < 1e-12);
            assert!((m.det() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = GaugeField::random(Group::SU2, 2, 2, 0.8, &mut rng);
        let b = GaugeField::random(Group::SU2, 2, 1, 0.5, &mut rng);
        let g = a.compose(&b).unwrap();
        let x = [0.31, 0.64];
        let h = 1e-6;
        for mu in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[mu] += h;
            xm[mu] -= h;
            let fd = (g.matrix_at(xp) - g.matrix_at(xm)).scale_re(0.5 / h);
            assert!(fd.distance(&g.derivative_at(x, mu)) < 1e-7);
            let fdi = (g.matrix_at(xp).adjoint() - g.matrix_at(xm).adjoint()).scale_re(0.5 / h);
            assert!(fdi.distance(&g.inverse_derivative_at(x, mu)) < 1e-7);
        }
    }
}
