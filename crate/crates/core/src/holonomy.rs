//! Smooth connections on `T^d`, their path-ordered holonomies along curves and
//! graphs, and the classical gauge action.
//!
//! Ordering convention: along a curve parameterized by `t in [0, 1]` the
//! holonomy is `E_1 E_2 ... E_n`, earlier factors on the left. With this
//! convention the transformed connection `g A g^-1 + g d(g^-1)` has holonomy
//! `g(start) Hol g(end)^-1`, and a composite curve has holonomy
//! `Hol(first) Hol(second)`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::{coords_matrix, fit, LieField, PhaseTable};
use crate::gauge::GaugeField;
use crate::graph::Graph;
use crate::group::{exp_matrix, AlgebraElement, Group, GroupElement};
use crate::linalg::{CMat, MatrixEntries};
use crate::torus::{Curve, Diffeo, TangentVector, TorusPoint, POINT_TOL};
use crate::{Error, Result};

/// Default number of midpoint steps per curve.
pub const DEFAULT_STEPS: usize = 256;

/// Largest refit residual accepted by [`gauge_transform`] and [`pullback`].
pub const REFIT_TOL: f64 = 1e-8;

/// A band-limited algebra-valued 1-form `sum_mu A_mu dx^mu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothConnection {
    group: Group,
    dim: usize,
    components: Vec<LieField>,
}

impl SmoothConnection {
    pub fn new(components: Vec<LieField>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("a connection needs components".into()))?;
        let (group, dim) = (first.group(), first.dim());
        if components.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "{} components on a torus of dimension {dim}",
                components.len()
            )));
        }
        if components.iter().any(|c| c.group() != group) {
            return Err(Error::GroupMismatch);
        }
        if components.iter().any(|c| c.dim() != dim) {
            return Err(Error::InvalidArgument("components on different tori".into()));
        }
        Ok(SmoothConnection {
            group,
            dim,
            components,
        })
    }

    pub fn zero(group: Group, dim: usize) -> Self {
        SmoothConnection {
            group,
            dim,
            components: vec![LieField::zero(group, dim); dim],
        }
    }

    /// Constant-coefficient connection `A_mu = values[mu]`.
    pub fn constant(values: &[AlgebraElement]) -> Result<Self> {
        let dim = values.len();
        Self::new(values.iter().map(|v| LieField::constant(v, dim)).collect())
    }

    pub fn random<R: Rng + ?Sized>(
        group: Group,
        dim: usize,
        band: usize,
        amplitude: f64,
        rng: &mut R,
    ) -> Self {
        SmoothConnection {
            group,
            dim,
            components: (0..dim)
                .map(|_| LieField::random(group, dim, band, amplitude, rng))
                .collect(),
        }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[LieField] {
        &self.components
    }

    pub fn band(&self) -> usize {
        self.components.iter().map(LieField::band).max().unwrap_or(0)
    }

    /// The pairing `A(x)(V) = sum_mu A_mu(x) V^mu`.
    pub fn evaluate(&self, x: &TorusPoint, v: &TangentVector) -> Result<AlgebraElement> {
        if !v.base.approx_eq(x, POINT_TOL) || x.dim() != self.dim {
            return Err(Error::BaseMismatch);
        }
        Ok(AlgebraElement::from_matrix_unchecked(
            self.group,
            self.evaluate_raw(x.raw(), v.raw()),
        ))
    }

    /// `A(x)(v)` as a matrix at a lifted point.
    pub(crate) fn evaluate_raw(&self, x: [f64; 2], v: [f64; 2]) -> CMat {
        let table = PhaseTable::new(x, self.dim, self.band());
        let mut acc = [0.0; 3];
        let mut tmp = [0.0; 3];
        for (mu, comp) in self.components.iter().enumerate() {
            if v[mu] == 0.0 || comp.is_zero() {
                continue;
            }
            comp.coords_with(&table, &mut tmp);
            for a in 0..3 {
                acc[a] += v[mu] * tmp[a];
            }
        }
        coords_matrix(self.group, &acc)
    }

    /// Exact `int_0^1 A(x + t delta)(delta) dt`.
    pub fn segment_integral(&self, x: [f64; 2], delta: [f64; 2]) -> AlgebraElement {
        let mut acc = [0.0; 3];
        for (mu, comp) in self.components.iter().enumerate() {
            if delta[mu] == 0.0 {
                continue;
            }
            let avg = comp.segment_average(x, delta);
            for a in 0..3 {
                acc[a] += delta[mu] * avg[a];
            }
        }
        AlgebraElement::from_matrix_unchecked(self.group, coords_matrix(self.group, &acc))
    }

    pub fn add(&self, other: &SmoothConnection) -> Result<SmoothConnection> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::InvalidArgument("connections on different tori".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(SmoothConnection {
            group: self.group,
            dim: self.dim,
            components,
        })
    }

    pub fn scale(&self, s: f64) -> SmoothConnection {
        SmoothConnection {
            group: self.group,
            dim: self.dim,
            components: self.components.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: SmoothConnection = serde_json::from_str(s)?;
        SmoothConnection::new(c.components)
    }
}

/// Path-ordered holonomy by the midpoint rule with `steps` uniform steps.
pub fn holonomy(a: &SmoothConnection, gamma: &Curve, steps: usize) -> GroupElement {
    let steps = steps.max(1);
    let dt = 1.0 / steps as f64;
    let mut h = CMat::identity(a.group.matrix_dim());
    for j in 0..steps {
        let t = (j as f64 + 0.5) * dt;
        let (x, v) = gamma.lifted_at(t);
        let step = a.evaluate_raw(x, v).scale_re(dt);
        h = h * exp_matrix(a.group, &step);
    }
    GroupElement::from_matrix_unchecked(a.group, h)
}

/// Holonomy along the straight segment from lifted `x` to `x + delta`.
pub(crate) fn segment_holonomy(
    a: &SmoothConnection,
    x: [f64; 2],
    delta: [f64; 2],
    steps: usize,
) -> GroupElement {
    let steps = steps.max(1);
    let dt = 1.0 / steps as f64;
    let mut h = CMat::identity(a.group.matrix_dim());
    for j in 0..steps {
        let t = (j as f64 + 0.5) * dt;
        let p = [x[0] + t * delta[0], x[1] + t * delta[1]];
        h = h * exp_matrix(a.group, &a.evaluate_raw(p, delta).scale_re(dt));
    }
    GroupElement::from_matrix_unchecked(a.group, h)
}

/// One group element per edge of a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "AssignmentRecord", try_from = "AssignmentRecord")]
pub struct HolonomyAssignment {
    pub group: Group,
    pub values: Vec<GroupElement>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub group: Group,
    pub edges: Vec<EdgeValue>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeValue {
    pub edge: usize,
    pub matrix: MatrixEntries,
}

impl From<HolonomyAssignment> for AssignmentRecord {
    fn from(h: HolonomyAssignment) -> Self {
        AssignmentRecord {
            group: h.group,
            edges: h
                .values
                .iter()
                .enumerate()
                .map(|(edge, g)| EdgeValue {
                    edge,
                    matrix: MatrixEntries::from(g.matrix()),
                })
                .collect(),
        }
    }
}

impl TryFrom<AssignmentRecord> for HolonomyAssignment {
    type Error = Error;

    fn try_from(r: AssignmentRecord) -> Result<Self> {
        let mut values = vec![None; r.edges.len()];
        for e in &r.edges {
            let slot = values.get_mut(e.edge).ok_or_else(|| {
                Error::InvalidArgument(format!("edge index {} out of range", e.edge))
            })?;
            *slot = Some(GroupElement::new(r.group, CMat::try_from(&e.matrix)?)?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::InvalidArgument(format!("edge {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(HolonomyAssignment {
            group: r.group,
            values,
        })
    }
}

impl HolonomyAssignment {
    pub fn identity(group: Group, edges: usize) -> Self {
        HolonomyAssignment {
            group,
            values: vec![group.identity(); edges],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest edgewise Frobenius distance.
    pub fn max_distance(&self, other: &HolonomyAssignment) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.matrix().distance(b.matrix()))
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `Hol_Gamma(A)`: holonomy along every edge, in edge order.
pub fn hol_graph(a: &SmoothConnection, gamma: &Graph, steps: usize) -> HolonomyAssignment {
    HolonomyAssignment {
        group: a.group,
        values: gamma
            .edges
            .par_iter()
            .map(|e| holonomy(a, &e.curve, steps))
            .collect(),
    }
}

/// Result of re-fitting a transformed connection to a Fourier band.
#[derive(Clone, Debug)]
pub struct Refit {
    pub connection: SmoothConnection,
    pub residual: f64,
}

/// `A -> g A g^-1 + g d(g^-1)`, sampled and re-fitted to `band`; the residual
/// is reported and not checked.
pub fn gauge_transform_fit(a: &SmoothConnection, g: &GaugeField, band: usize) -> Result<Refit> {
    if a.group != g.group() {
        return Err(Error::GroupMismatch);
    }
    if a.dim != g.dim() {
        return Err(Error::InvalidArgument("gauge field on a different torus".into()));
    }
    if g.is_constant() {
        let c = g.value_raw([0.0, 0.0]);
        return Ok(Refit {
            connection: SmoothConnection {
                group: a.group,
                dim: a.dim,
                components: a.components.iter().map(|f| f.conjugate_by(&c)).collect(),
            },
            residual: 0.0,
        });
    }
    let mut components = Vec::with_capacity(a.dim);
    let mut residual: f64 = 0.0;
    for (mu, comp) in a.components.iter().enumerate() {
        let f = fit(a.group, a.dim, band, |x| g.transformed_component(comp, x, mu));
        residual = residual.max(f.residual);
        components.push(f.field);
    }
    Ok(Refit {
        connection: SmoothConnection {
            group: a.group,
            dim: a.dim,
            components,
        },
        residual,
    })
}

/// Gauge transform with the refit residual checked against [`REFIT_TOL`].
pub fn gauge_transform(a: &SmoothConnection, g: &GaugeField, band: usize) -> Result<SmoothConnection> {
    let r = gauge_transform_fit(a, g, band)?;
    if r.residual > REFIT_TOL {
        return Err(Error::BandOverflow {
            residual: r.residual,
            tolerance: REFIT_TOL,
        });
    }
    Ok(r.connection)
}

/// Pullback `sigma^* A`, with `(sigma^* A)(x)(V) = A(sigma x)(d sigma V)`.
/// Translations act exactly; shears are re-fitted to `band`.
pub fn pullback_fit(a: &SmoothConnection, sigma: &Diffeo, band: usize) -> Result<Refit> {
    sigma.validate()?;
    match sigma {
        Diffeo::Identity => Ok(Refit {
            connection: a.clone(),
            residual: 0.0,
        }),
        Diffeo::Translation { offset } => {
            let mut o = [0.0; 2];
            o[..offset.len().min(2)].copy_from_slice(&offset[..offset.len().min(2)]);
            Ok(Refit {
                connection: SmoothConnection {
                    group: a.group,
                    dim: a.dim,
                    components: a.components.iter().map(|f| f.translate(o)).collect(),
                },
                residual: 0.0,
            })
        }
        Diffeo::Shear { .. } => {
            let dim = a.dim;
            let mut components = Vec::with_capacity(dim);
            let mut residual: f64 = 0.0;
            for mu in 0..dim {
                let f = fit(a.group, dim, band, |x| {
                    let y = sigma.map_lifted(x, dim);
                    let j = sigma.jacobian(x);
                    let mut out = [0.0; 3];
                    for (nu, comp) in a.components.iter().enumerate() {
                        let c = comp.coords_at(y);
                        for k in 0..3 {
                            out[k] += j[nu][mu] * c[k];
                        }
                    }
                    out
                });
                residual = residual.max(f.residual);
                components.push(f.field);
            }
            Ok(Refit {
                connection: SmoothConnection {
                    group: a.group,
                    dim,
                    components,
                },
                residual,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::lattice_system;
    use crate::group::exp_map;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn u1_const(alpha: f64) -> SmoothConnection {
        SmoothConnection::constant(&[AlgebraElement::from_coords(Group::U1, &[alpha])]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let x = TorusPoint::d1(0.3);
        let z = SmoothConnection::zero(Group::SU2, 1);
        assert_eq!(
            z.evaluate(&x, &TangentVector::new(x, &[2.0])).unwrap().norm(),
            0.0
        );
        let a = u1_const(2.0 * PI);
        let val = a.evaluate(&x, &TangentVector::new(x, &[1.0])).unwrap();
        assert!((val.matrix().get(0, 0).im - 2.0 * PI).abs() < 1e-12);
        let other = TorusPoint::d1(0.4);
        assert!(matches!(
            a.evaluate(&other, &TangentVector::new(x, &[1.0])),
            Err(Error::BaseMismatch)
        ));
    }

    #[test]
    fn evaluate_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = SmoothConnection::random(Group::SU2, 2, 2, 1.0, &mut rng);
        let x = TorusPoint::d2(0.2, 0.9);
        let v = TangentVector::new(x, &[0.3, -1.2]);
        let w = TangentVector::new(x, &[2.0, 0.5]);
        let comb = TangentVector::new(x, &[1.5 * 0.3 - 2.0 * 2.0, 1.5 * -1.2 - 2.0 * 0.5]);
        let lhs = a.evaluate(&x, &comb).unwrap();
        let rhs = a
            .evaluate(&x, &v)
            .unwrap()
            .scale(1.5)
            .add(&a.evaluate(&x, &w).unwrap().scale(-2.0));
        assert!(lhs.matrix().distance(rhs.matrix()) < 1e-12);
    }

    #[test]
    fn abelian_loop_holonomy_is_step_independent() {
        let alpha = 0.7;
        let loop_curve = Curve::geodesic(TorusPoint::d1(0.25), &[1.0]);
        for steps in [1, 7, 64] {
            let h = holonomy(&u1_const(alpha), &loop_curve, steps);
            assert!(h.matrix().distance(&GroupElement::u1(alpha).matrix().clone()) < 1e-13);
        }
    }

    #[test]
    fn abelian_holonomy_converges_at_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = SmoothConnection::random(Group::U1, 1, 3, 1.0, &mut rng);
        let c = Curve::geodesic(TorusPoint::d1(0.1), &[0.6]);
        let exact = exp_map(&a.segment_integral([0.1, 0.0], [0.6, 0.0]));
        let e1 = holonomy(&a, &c, 32).matrix().distance(exact.matrix());
        let e2 = holonomy(&a, &c, 64).matrix().distance(exact.matrix());
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.1, "observed order {order}");
    }

    #[test]
    fn reversal_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = SmoothConnection::random(Group::SU2, 2, 2, 1.0, &mut rng);
        let c = Curve::geodesic(TorusPoint::d2(0.1, 0.2), &[0.4, -0.3]);
        let h = holonomy(&a, &c, 200);
        let r = holonomy(&a, &c.reversed(), 200);
        assert!((h * r).matrix().distance(&CMat::identity(2)) < 1e-10);
    }

    #[test]
    fn refinement_composes_with_matched_grids() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = SmoothConnection::random(Group::SU2, 2, 2, 1.0, &mut rng);
        let sys = lattice_system(2, 2).unwrap();
        let (coarse, fine) = (sys.level(1), sys.level(2));
        for (e, kids) in sys.refinement[0].iter().enumerate() {
            let parent = holonomy(&a, &coarse.edges[e].curve, 1024);
            let first = holonomy(&a, &fine.edges[kids[0]].curve, 512);
            let second = holonomy(&a, &fine.edges[kids[1]].curve, 512);
            assert!(parent.matrix().distance((first * second).matrix()) < 1e-8);
        }
    }

    #[test]
    fn identity_gauge_is_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = SmoothConnection::random(Group::SU2, 1, 2, 1.0, &mut rng);
        let same = gauge_transform(&a, &GaugeField::identity(Group::SU2, 1), 2).unwrap();
        let x = TorusPoint::d1(0.42);
        let v = TangentVector::new(x, &[1.0]);
        let d = same.evaluate(&x, &v).unwrap().matrix().distance(a.evaluate(&x, &v).unwrap().matrix());
        assert!(d < 1e-14);
    }

    #[test]
    fn u1_gauge_adds_minus_derivative() {
        let a = SmoothConnection::zero(Group::U1, 1);
        let y = LieField::from_modes(
            Group::U1,
            1,
            vec![([1, 0], vec![crate::linalg::C64::new(0.0, -0.3)])],
        )
        .unwrap();
        let g = GaugeField::exp_of(y.clone());
        let x = TorusPoint::d1(0.17);
        let v = TangentVector::new(x, &[1.0]);
        let got = g.act_on_connection_at(&a, &v).unwrap();
        // oracle: g d(g^-1) = -i Y'(x) for g = e^{i Y}
        let dy = y.derivative(0).coords_at([0.17, 0.0])[0];
        assert!((got.matrix().get(0, 0).im + dy).abs() < 1e-12);
    }

    #[test]
    fn gauge_covariance_of_holonomy() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = SmoothConnection::random(Group::SU2, 2, 1, 0.8, &mut rng);
        let g = GaugeField::random(Group::SU2, 2, 1, 0.4, &mut rng);
        let r = gauge_transform_fit(&a, &g, 14).unwrap();
        assert!(r.residual < 1e-8, "residual {}", r.residual);
        let graph = lattice_system(2, 1).unwrap().level(1).clone();
        let before = hol_graph(&a, &graph, 2048);
        let after = hol_graph(&r.connection, &graph, 2048);
        for (e, edge) in graph.edges.iter().enumerate() {
            let expect = g.value(&graph.vertices[edge.tail])
                * before.values[e]
                * g.value(&graph.vertices[edge.head]).inverse();
            assert!(after.values[e].matrix().distance(expect.matrix()) < 1e-6);
        }
    }

    #[test]
    fn constant_gauge_is_pure_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = SmoothConnection::random(Group::SU2, 1, 2, 1.0, &mut rng);
        let c = crate::group::haar_sample(Group::SU2, 3, 1)[0];
        let t = gauge_transform(&a, &GaugeField::constant(c, 1), 2).unwrap();
        let x = TorusPoint::d1(0.6);
        let v = TangentVector::new(x, &[1.0]);
        let expect = a.evaluate(&x, &v).unwrap().conjugate_by(&c);
        assert!(t.evaluate(&x, &v).unwrap().matrix().distance(expect.matrix()) < 1e-13);
    }

    #[test]
    fn band_overflow_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = SmoothConnection::random(Group::SU2, 1, 2, 1.0, &mut rng);
        let g = GaugeField::random(Group::SU2, 1, 2, 1.5, &mut rng);
        assert!(matches!(
            gauge_transform(&a, &g, 2),
            Err(Error::BandOverflow { .. })
        ));
    }

    #[test]
    fn assignment_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = SmoothConnection::random(Group::SU2, 1, 1, 1.0, &mut rng);
        let graph = lattice_system(1, 2).unwrap().level(2).clone();
        let h = hol_graph(&a, &graph, 64);
        let back = HolonomyAssignment::from_json(&h.to_json().unwrap()).unwrap();
        assert!(h.max_distance(&back) < 1e-15);
        let conn = SmoothConnection::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(conn, a);
    }
}
