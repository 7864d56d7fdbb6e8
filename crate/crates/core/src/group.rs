//! The compact gauge groups U(1) and SU(2) and their Lie algebras.
//!
//! Algebra elements are anti-Hermitian matrices in the defining
//! representation. The invariant inner product is `<X, Y> = -tr(XY)` and the
//! stored basis is orthonormal for it:
//!
//! * U(1): `b = i`
//! * SU(2): `b_k = -(i / sqrt 2) sigma_k`, so `[b_j, b_k] = sqrt 2 eps_jkl b_l`.

use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, MatrixEntries, C64, I, ONE, ZERO};
use crate::{Error, Result};

/// Tolerance used when validating group and algebra membership.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    U1,
    SU2,
}

/// Structural data of a group: matrix size, orthonormal algebra basis and
/// structure constants `[b_i, b_j] = sum_k c[i][j][k] b_k`.
#[derive(Clone, Debug)]
pub struct LieGroupSpec {
    pub id: Group,
    pub matrix_dim: usize,
    pub algebra_basis: Vec<AlgebraElement>,
    pub structure_constants: Vec<Vec<Vec<f64>>>,
}

impl Group {
    pub fn matrix_dim(self) -> usize {
        match self {
            Group::U1 => 1,
            Group::SU2 => 2,
        }
    }

    pub fn algebra_dim(self) -> usize {
        match self {
            Group::U1 => 1,
            Group::SU2 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::U1 => "U1",
            Group::SU2 => "SU2",
        }
    }

    pub fn basis_matrix(self, a: usize) -> CMat {
        match self {
            Group::U1 => {
                assert_eq!(a, 0);
                CMat::scalar(I)
            }
            Group::SU2 => {
                let s = -I / SQRT_2;
                match a {
                    0 => CMat::from_rows2([ZERO, s], [s, ZERO]),
                    1 => CMat::from_rows2([ZERO, -s * I], [s * I, ZERO]),
                    2 => CMat::from_rows2([s, ZERO], [ZERO, -s]),
                    _ => panic!("SU2 algebra index {a} out of range"),
                }
            }
        }
    }

    pub fn basis(self) -> Vec<AlgebraElement> {
        (0..self.algebra_dim())
            .map(|a| AlgebraElement {
                group: self,
                x: self.basis_matrix(a),
            })
            .collect()
    }

    /// `c[i][j][k]` with `[b_i, b_j] = sum_k c[i][j][k] b_k`.
    pub fn structure_constants(self) -> Vec<Vec<Vec<f64>>> {
        let n = self.algebra_dim();
        let mut c = vec![vec![vec![0.0; n]; n]; n];
        if self == Group::SU2 {
            for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                c[i][j][k] = SQRT_2;
                c[j][i][k] = -SQRT_2;
            }
        }
        c
    }

    pub fn spec(self) -> LieGroupSpec {
        LieGroupSpec {
            id: self,
            matrix_dim: self.matrix_dim(),
            algebra_basis: self.basis(),
            structure_constants: self.structure_constants(),
        }
    }

    pub fn identity(self) -> GroupElement {
        GroupElement {
            group: self,
            m: CMat::identity(self.matrix_dim()),
        }
    }

    pub fn algebra_zero(self) -> AlgebraElement {
        AlgebraElement {
            group: self,
            x: CMat::zeros(self.matrix_dim()),
        }
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "U1" | "U(1)" => Ok(Group::U1),
            "SU2" | "SU(2)" => Ok(Group::SU2),
            other => Err(Error::InvalidArgument(format!("unknown group {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "GroupElementRecord", try_from = "GroupElementRecord")]
pub struct GroupElement {
    group: Group,
    m: CMat,
}

/// Serialized form of a group element: group id and row-major entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElementRecord {
    pub group: Group,
    pub matrix: MatrixEntries,
}

impl From<GroupElement> for GroupElementRecord {
    fn from(g: GroupElement) -> Self {
        GroupElementRecord {
            group: g.group,
            matrix: MatrixEntries::from(&g.m),
        }
    }
}

impl TryFrom<GroupElementRecord> for GroupElement {
    type Error = Error;

    fn try_from(r: GroupElementRecord) -> Result<Self> {
        GroupElement::new(r.group, CMat::try_from(&r.matrix)?)
    }
}

impl GroupElement {
    /// Wraps a matrix, checking unitarity (and unit determinant for SU2).
    pub fn new(group: Group, m: CMat) -> Result<Self> {
        if m.order() != group.matrix_dim() {
            return Err(Error::GroupMismatch);
        }
        let unitary_defect = (m.adjoint() * m).distance(&CMat::identity(m.order()));
        let det_defect = match group {
            Group::U1 => 0.0,
            Group::SU2 => (m.det() - ONE).norm(),
        };
        if unitary_defect > MEMBERSHIP_TOL || det_defect > MEMBERSHIP_TOL {
            return Err(Error::InvalidArgument(format!(
                "matrix is not in {group}: unitarity defect {unitary_defect:e}, det defect {det_defect:e}"
            )));
        }
        Ok(GroupElement { group, m })
    }

    pub(crate) fn from_matrix_unchecked(group: Group, m: CMat) -> Self {
        GroupElement { group, m }
    }

    /// U(1) element `e^{i phi}`.
    pub fn u1(phi: f64) -> Self {
        GroupElement {
            group: Group::U1,
            m: CMat::scalar(C64::from_polar(1.0, phi)),
        }
    }

    /// SU(2) element from a unit quaternion `q0 + i(q1 s1 + q2 s2 + q3 s3)`.
    pub fn su2_from_quaternion(q: [f64; 4]) -> Self {
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        let [q0, q1, q2, q3] = q.map(|v| v / n);
        GroupElement {
            group: Group::SU2,
            m: CMat::from_rows2(
                [C64::new(q0, q3), C64::new(q2, q1)],
                [C64::new(-q2, q1), C64::new(q0, -q3)],
            ),
        }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            group: self.group,
            m: self.m.adjoint(),
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupElement {
            group: self.group,
            m: self.m * other.m,
        })
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// Bi-invariant geodesic distance `|log(g^-1 h)|` for the trace-form norm.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        let rel = self.m.adjoint() * other.m;
        match self.group {
            Group::U1 => rel.get(0, 0).arg().abs(),
            Group::SU2 => {
                // eigenvalues e^{+-i alpha}; |log| = sqrt(2) alpha
                let c = (rel.trace().re / 2.0).clamp(-1.0, 1.0);
                let h = (rel - rel.adjoint()).scale_re(0.5);
                let s = (h.get(0, 0).norm_sqr() + h.get(0, 1).norm_sqr()).sqrt();
                SQRT_2 * s.atan2(c)
            }
        }
    }
}

impl std::ops::Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        assert_eq!(self.group, rhs.group, "group mismatch in product");
        GroupElement {
            group: self.group,
            m: self.m * rhs.m,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraElement {
    group: Group,
    x: CMat,
}

impl AlgebraElement {
    /// Wraps a matrix, checking anti-Hermiticity (and tracelessness for SU2).
    pub fn new(group: Group, x: CMat) -> Result<Self> {
        if x.order() != group.matrix_dim() {
            return Err(Error::GroupMismatch);
        }
        let herm = (x + x.adjoint()).frobenius_norm();
        let tr = match group {
            Group::U1 => 0.0,
            Group::SU2 => x.trace().norm(),
        };
        if herm > MEMBERSHIP_TOL || tr > MEMBERSHIP_TOL {
            return Err(Error::InvalidArgument(format!(
                "matrix is not in the Lie algebra of {group}"
            )));
        }
        Ok(AlgebraElement { group, x })
    }

    pub(crate) fn from_matrix_unchecked(group: Group, x: CMat) -> Self {
        AlgebraElement { group, x }
    }

    /// `sum_a coords[a] b_a`.
    pub fn from_coords(group: Group, coords: &[f64]) -> Self {
        assert_eq!(coords.len(), group.algebra_dim());
        let mut x = CMat::zeros(group.matrix_dim());
        for (a, c) in coords.iter().enumerate() {
            x += group.basis_matrix(a).scale_re(*c);
        }
        AlgebraElement { group, x }
    }

    /// Coordinates in the orthonormal basis, `<X, b_a> = -Re tr(X b_a)`.
    pub fn coords(&self) -> Vec<f64> {
        (0..self.group.algebra_dim())
            .map(|a| -(self.x * self.group.basis_matrix(a)).trace().re)
            .collect()
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn matrix(&self) -> &CMat {
        &self.x
    }

    /// Trace-form norm `sqrt(-tr X^2)`.
    pub fn norm(&self) -> f64 {
        (-(self.x * self.x).trace().re).max(0.0).sqrt()
    }

    pub fn inner(&self, other: &AlgebraElement) -> f64 {
        -(self.x * other.x).trace().re
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.group, other.group);
        AlgebraElement {
            group: self.group,
            x: self.x + other.x,
        }
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        AlgebraElement {
            group: self.group,
            x: self.x.scale_re(s),
        }
    }

    /// Conjugation `g X g^-1`.
    pub fn conjugate_by(&self, g: &GroupElement) -> AlgebraElement {
        AlgebraElement {
            group: self.group,
            x: g.m * self.x * g.m.adjoint(),
        }
    }
}

/// Matrix exponential `exp: g -> G` in closed form.
pub fn exp_map(x: &AlgebraElement) -> GroupElement {
    GroupElement {
        group: x.group,
        m: exp_matrix(x.group, &x.x),
    }
}

pub(crate) fn exp_matrix(group: Group, x: &CMat) -> CMat {
    match group {
        Group::U1 => CMat::scalar(x.get(0, 0).exp()),
        Group::SU2 => {
            let theta2 = x.get(0, 0).norm_sqr() + x.get(0, 1).norm_sqr();
            let theta = theta2.sqrt();
            let (c, s) = (theta.cos(), sinc(theta));
            CMat::identity(2).scale_re(c) + x.scale_re(s)
        }
    }
}

/// `sin(t) / t`, with a series near zero.
fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sin() / t
    }
}

/// `(t cos t - sin t) / t^3`, the derivative factor of `sinc`.
fn sinc_slope(t: f64) -> f64 {
    if t.abs() < 1e-3 {
        let t2 = t * t;
        -1.0 / 3.0 + t2 / 30.0 - t2 * t2 / 840.0
    } else {
        (t * t.cos() - t.sin()) / (t * t * t)
    }
}

/// Derivative `d/dt exp(Z(t))` given `Z` and `dZ/dt`, both in the algebra.
pub fn exp_derivative(z: &AlgebraElement, zdot: &AlgebraElement) -> CMat {
    match z.group {
        Group::U1 => zdot.x * exp_matrix(Group::U1, &z.x),
        Group::SU2 => {
            let (x, xd) = (&z.x, &zdot.x);
            let theta = (x.get(0, 0).norm_sqr() + x.get(0, 1).norm_sqr()).sqrt();
            // q = theta * dtheta/dt
            let q = (x.get(0, 0).conj() * xd.get(0, 0) + x.get(0, 1).conj() * xd.get(0, 1)).re;
            CMat::identity(2).scale_re(-sinc(theta) * q)
                + x.scale_re(q * sinc_slope(theta))
                + xd.scale_re(sinc(theta))
        }
    }
}

/// Principal logarithm; fails at the cut locus (`-I` for SU2, `-1` for U1).
pub fn log_map(g: &GroupElement) -> Result<AlgebraElement> {
    const CUT_TOL: f64 = 1e-9;
    match g.group {
        Group::U1 => {
            let phi = g.m.get(0, 0).arg();
            if PI - phi.abs() < CUT_TOL {
                return Err(Error::OutOfPrincipalDomain);
            }
            Ok(AlgebraElement {
                group: Group::U1,
                x: CMat::scalar(C64::new(0.0, phi)),
            })
        }
        Group::SU2 => {
            let m = &g.m;
            let c = m.trace().re / 2.0;
            // traceless anti-Hermitian part equals sin(theta)/theta * X
            let mut h = (*m - m.adjoint()).scale_re(0.5);
            let tr = h.trace() / 2.0;
            h = h - CMat::identity(2).scale(tr);
            let s = (h.get(0, 0).norm_sqr() + h.get(0, 1).norm_sqr()).sqrt();
            let theta = s.atan2(c);
            if PI - theta < CUT_TOL {
                return Err(Error::OutOfPrincipalDomain);
            }
            Ok(AlgebraElement {
                group: Group::SU2,
                x: h.scale_re(1.0 / sinc(theta)),
            })
        }
    }
}

/// Lie bracket `XY - YX`.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    if x.group != y.group {
        return Err(Error::GroupMismatch);
    }
    Ok(AlgebraElement {
        group: x.group,
        x: x.x.commutator(&y.x),
    })
}

/// Draws one Haar-distributed element.
pub fn haar_draw<R: Rng + ?Sized>(group: Group, rng: &mut R) -> GroupElement {
    match group {
        Group::U1 => GroupElement::u1(rng.random_range(0.0..2.0 * PI)),
        Group::SU2 => loop {
            let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let n2: f64 = q.iter().map(|v| v * v).sum();
            if n2 > 1e-24 {
                break GroupElement::su2_from_quaternion(q);
            }
        },
    }
}

/// `n` Haar-distributed elements, deterministic in `seed`.
pub fn haar_sample(group: Group, seed: u64, n: usize) -> Vec<GroupElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| haar_draw(group, &mut rng)).collect()
}

/// Random algebra element with independent normal coordinates of the given scale.
pub fn random_algebra<R: Rng + ?Sized>(group: Group, scale: f64, rng: &mut R) -> AlgebraElement {
    let coords: Vec<f64> = (0..group.algebra_dim())
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    AlgebraElement::from_coords(group, &coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor_exp(x: &CMat, terms: usize) -> CMat {
        let n = x.order();
        let mut sum = CMat::identity(n);
        let mut term = CMat::identity(n);
        for k in 1..terms {
            term = (term * *x).scale_re(1.0 / k as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn basis_is_orthonormal_and_closed_under_structure_constants() {
        for g in [Group::U1, Group::SU2] {
            let basis = g.basis();
            let c = g.structure_constants();
            for (i, bi) in basis.iter().enumerate() {
                for (j, bj) in basis.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((bi.inner(bj) - expect).abs() < 1e-14);
                    let lhs = bracket(bi, bj).unwrap();
                    let mut rhs = CMat::zeros(g.matrix_dim());
                    for (k, bk) in basis.iter().enumerate() {
                        rhs += bk.matrix().scale_re(c[i][j][k]);
                    }
                    assert!(lhs.matrix().distance(&rhs) < 1e-12);
                    for k in 0..basis.len() {
                        assert_eq!(c[i][j][k], -c[j][i][k]);
                        assert_eq!(c[i][j][k], c[j][k][i]);
                    }
                }
            }
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        for g in [Group::U1, Group::SU2] {
            assert_eq!(exp_map(&g.algebra_zero()).matrix(), g.identity().matrix());
        }
    }

    #[test]
    fn su2_exp_matches_taylor_series() {
        for theta in [0.0, 1e-6, 0.3, 1.7, 3.0, 3.14, 5.0] {
            let x = Group::SU2.basis()[2].scale(theta);
            let closed = exp_map(&x);
            let series = taylor_exp(x.matrix(), 40);
            assert!(closed.matrix().distance(&series) < 1e-12, "theta = {theta}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = random_algebra(Group::SU2, 1.0, &mut rng);
            assert!(exp_map(&x).matrix().distance(&taylor_exp(x.matrix(), 40)) < 1e-12);
        }
    }

    #[test]
    fn u1_exp_matches_scalar_exponential() {
        let alpha = 0.8;
        let g = exp_map(&Group::U1.basis()[0].scale(alpha));
        assert!((g.matrix().get(0, 0) - C64::from_polar(1.0, alpha)).norm() < 1e-15);
    }

    #[test]
    fn exp_results_are_group_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = random_algebra(Group::SU2, 2.0, &mut rng);
            let g = exp_map(&x);
            assert!(GroupElement::new(Group::SU2, *g.matrix()).is_ok());
        }
    }

    #[test]
    fn log_inverts_exp() {
        assert_eq!(log_map(&Group::SU2.identity()).unwrap().norm(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = random_algebra(Group::SU2, 0.5, &mut rng);
            let back = log_map(&exp_map(&x)).unwrap();
            assert!(back.matrix().distance(x.matrix()) < 1e-10);
        }
        for phi in [-3.0, -0.2, 0.0, 1.0, 3.1] {
            let x = Group::U1.basis()[0].scale(phi);
            assert!(log_map(&exp_map(&x)).unwrap().matrix().distance(x.matrix()) < 1e-12);
        }
    }

    #[test]
    fn log_fails_at_cut_locus() {
        let minus_i = GroupElement::new(Group::SU2, CMat::identity(2).scale_re(-1.0)).unwrap();
        assert!(matches!(log_map(&minus_i), Err(Error::OutOfPrincipalDomain)));
        assert!(matches!(
            log_map(&GroupElement::u1(PI)),
            Err(Error::OutOfPrincipalDomain)
        ));
    }

    #[test]
    fn exp_derivative_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for g in [Group::U1, Group::SU2] {
            for scale in [1e-5, 0.4, 2.5] {
                let z = random_algebra(g, scale, &mut rng);
                let zd = random_algebra(g, 1.0, &mut rng);
                let h = 1e-5;
                let fwd = exp_matrix(g, &(z.add(&zd.scale(h))).x);
                let bwd = exp_matrix(g, &(z.add(&zd.scale(-h))).x);
                let fd = (fwd - bwd).scale_re(0.5 / h);
                assert!(exp_derivative(&z, &zd).distance(&fd) < 1e-8);
            }
        }
    }

    #[test]
    fn bracket_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = random_algebra(Group::SU2, 1.0, &mut rng);
            let y = random_algebra(Group::SU2, 1.0, &mut rng);
            let z = random_algebra(Group::SU2, 1.0, &mut rng);
            assert!(bracket(&x, &x).unwrap().norm() < 1e-15);
            let jac = bracket(&x, &bracket(&y, &z).unwrap()).unwrap().matrix().clone()
                + *bracket(&y, &bracket(&z, &x).unwrap()).unwrap().matrix()
                + *bracket(&z, &bracket(&x, &y).unwrap()).unwrap().matrix();
            assert!(jac.frobenius_norm() < 1e-12);
        }
        let a = Group::U1.basis()[0].scale(1.3);
        let b = Group::U1.basis()[0].scale(-0.4);
        assert_eq!(bracket(&a, &b).unwrap().norm(), 0.0);
        assert!(matches!(
            bracket(&a, &Group::SU2.basis()[0]),
            Err(Error::GroupMismatch)
        ));
    }

    #[test]
    fn haar_sampling_is_deterministic_and_centered() {
        let a = haar_sample(Group::SU2, 42, 1);
        let b = haar_sample(Group::SU2, 42, 1);
        assert_eq!(a[0].matrix(), b[0].matrix());

        let n = 10_000;
        let u1 = haar_sample(Group::U1, 1, n);
        let mean: C64 = u1.iter().map(|g| g.trace()).sum::<C64>() / n as f64;
        assert!(mean.norm() <= 0.05);

        // E[tr/2] = 0, Var[Re tr/2] = 1/4 for SU2 Haar.
        let su2 = haar_sample(Group::SU2, 2, n);
        let mean: f64 = su2.iter().map(|g| g.trace().re / 2.0).sum::<f64>() / n as f64;
        assert!(mean.abs() <= 3.0 * 0.5 / (n as f64).sqrt());
    }

    #[test]
    fn su2_distance_is_norm_of_log() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let x = random_algebra(Group::SU2, 0.7, &mut rng);
            let g = haar_draw(Group::SU2, &mut rng);
            let h = g * exp_map(&x);
            assert!((g.distance(&h) - x.norm()).abs() < 1e-10);
        }
    }
}
