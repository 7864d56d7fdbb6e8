//! The flat unit torus `T^d`, `d in {1, 2}`: points, tangent vectors, curves
//! and a small family of diffeomorphisms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Coordinates agree when their circular distance is below this.
pub const POINT_TOL: f64 = 1e-12;

#[inline]
pub fn wrap(x: f64) -> f64 {
    let w = x - x.floor();
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Shortest signed displacement `b - a` on the circle, in `(-1/2, 1/2]`.
#[inline]
pub fn circle_displacement(a: f64, b: f64) -> f64 {
    0.5 - wrap(a - b + 0.5)
}

/// A point of `T^d`; coordinates live in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TorusPoint {
    dim: usize,
    c: [f64; 2],
}

impl TorusPoint {
    pub fn new(coords: &[f64]) -> Self {
        assert!(
            coords.len() == 1 || coords.len() == 2,
            "torus dimension must be 1 or 2"
        );
        let mut c = [0.0; 2];
        for (dst, src) in c.iter_mut().zip(coords) {
            *dst = wrap(*src);
        }
        TorusPoint {
            dim: coords.len(),
            c,
        }
    }

    pub fn d1(x: f64) -> Self {
        Self::new(&[x])
    }

    pub fn d2(x: f64, y: f64) -> Self {
        Self::new(&[x, y])
    }

    pub fn origin(dim: usize) -> Self {
        Self::new(&vec![0.0; dim])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim]
    }

    #[inline]
    pub(crate) fn raw(&self) -> [f64; 2] {
        self.c
    }

    /// `self + v` reduced mod 1.
    pub fn translate(&self, v: &[f64]) -> TorusPoint {
        debug_assert_eq!(v.len(), self.dim);
        let mut c = self.c;
        for (x, dv) in c.iter_mut().zip(v) {
            *x = wrap(*x + dv);
        }
        TorusPoint { dim: self.dim, c }
    }

    /// Shortest lift of `other - self`, each component in `(-1/2, 1/2]`.
    pub fn displacement_to(&self, other: &TorusPoint) -> [f64; 2] {
        let mut d = [0.0; 2];
        for (mu, dst) in d.iter_mut().enumerate().take(self.dim) {
            *dst = circle_displacement(self.c[mu], other.c[mu]);
        }
        d
    }

    pub fn distance(&self, other: &TorusPoint) -> f64 {
        let d = self.displacement_to(other);
        (d[0] * d[0] + d[1] * d[1]).sqrt()
    }

    pub fn approx_eq(&self, other: &TorusPoint, tol: f64) -> bool {
        self.dim == other.dim && self.distance(other) <= tol
    }
}

impl From<TorusPoint> for Vec<f64> {
    fn from(p: TorusPoint) -> Self {
        p.coords().to_vec()
    }
}

impl TryFrom<Vec<f64>> for TorusPoint {
    type Error = String;

    fn try_from(v: Vec<f64>) -> std::result::Result<Self, String> {
        if v.len() == 1 || v.len() == 2 {
            Ok(TorusPoint::new(&v))
        } else {
            Err(format!("torus point needs 1 or 2 coordinates, got {}", v.len()))
        }
    }
}

/// A tangent vector `(x, V_x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub base: TorusPoint,
    v: [f64; 2],
}

impl TangentVector {
    pub fn new(base: TorusPoint, v: &[f64]) -> Self {
        assert_eq!(v.len(), base.dim(), "vector dimension must match its base");
        let mut c = [0.0; 2];
        c[..v.len()].copy_from_slice(v);
        TangentVector { base, v: c }
    }

    pub fn components(&self) -> &[f64] {
        &self.v[..self.base.dim()]
    }

    pub(crate) fn raw(&self) -> [f64; 2] {
        self.v
    }

    pub fn scaled(&self, s: f64) -> TangentVector {
        TangentVector {
            base: self.base,
            v: [self.v[0] * s, self.v[1] * s],
        }
    }

    pub fn norm(&self) -> f64 {
        (self.v[0] * self.v[0] + self.v[1] * self.v[1]).sqrt()
    }
}

/// Flat-metric exponential `x + t V mod 1`.
pub fn geodesic_exp(x: &TorusPoint, v: &TangentVector, t: f64) -> Result<TorusPoint> {
    if !v.base.approx_eq(x, POINT_TOL) {
        return Err(Error::BaseMismatch);
    }
    let step: Vec<f64> = v.components().iter().map(|c| c * t).collect();
    Ok(x.translate(&step))
}

/// An oriented curve parameterized over `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Curve {
    /// `t -> start + t * displacement`.
    Geodesic {
        start: TorusPoint,
        displacement: Vec<f64>,
    },
    /// Piecewise-linear through the points, each segment taking equal parameter time.
    Sampled { points: Vec<TorusPoint> },
}

impl Curve {
    pub fn geodesic(start: TorusPoint, displacement: &[f64]) -> Self {
        assert_eq!(start.dim(), displacement.len());
        Curve::Geodesic {
            start,
            displacement: displacement.to_vec(),
        }
    }

    /// Shortest geodesic from `a` to `b` (positive lift at antipodes).
    pub fn shortest(a: &TorusPoint, b: &TorusPoint) -> Self {
        let d = a.displacement_to(b);
        Curve::geodesic(*a, &d[..a.dim()])
    }

    pub fn sampled(points: Vec<TorusPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument(
                "sampled curve needs at least two points".into(),
            ));
        }
        for w in points.windows(2) {
            let d = w[0].displacement_to(&w[1]);
            if d.iter().any(|c| c.abs() >= 0.5) {
                return Err(Error::InvalidArgument(
                    "consecutive curve samples must be closer than 1/2 per coordinate".into(),
                ));
            }
        }
        Ok(Curve::Sampled { points })
    }

    pub fn dim(&self) -> usize {
        match self {
            Curve::Geodesic { start, .. } => start.dim(),
            Curve::Sampled { points } => points[0].dim(),
        }
    }

    pub fn start(&self) -> TorusPoint {
        match self {
            Curve::Geodesic { start, .. } => *start,
            Curve::Sampled { points } => points[0],
        }
    }

    pub fn end(&self) -> TorusPoint {
        let total = self.total_displacement();
        self.start().translate(&total[..self.dim()])
    }

    /// Lifted displacement from start to end.
    pub fn total_displacement(&self) -> [f64; 2] {
        match self {
            Curve::Geodesic { displacement, .. } => {
                let mut d = [0.0; 2];
                d[..displacement.len()].copy_from_slice(displacement);
                d
            }
            Curve::Sampled { points } => {
                let mut d = [0.0; 2];
                for w in points.windows(2) {
                    let s = w[0].displacement_to(&w[1]);
                    d[0] += s[0];
                    d[1] += s[1];
                }
                d
            }
        }
    }

    /// Position and velocity at parameter `t in [0, 1]`, position in lifted coordinates.
    pub fn lifted_at(&self, t: f64) -> ([f64; 2], [f64; 2]) {
        match self {
            Curve::Geodesic {
                start,
                displacement,
            } => {
                let s = start.raw();
                let mut p = [0.0; 2];
                let mut v = [0.0; 2];
                for (mu, dv) in displacement.iter().enumerate() {
                    p[mu] = s[mu] + t * dv;
                    v[mu] = *dv;
                }
                (p, v)
            }
            Curve::Sampled { points } => {
                let segs = points.len() - 1;
                let u = (t * segs as f64).clamp(0.0, segs as f64);
                let k = (u.floor() as usize).min(segs - 1);
                let frac = u - k as f64;
                // lift through the preceding segments so the position is continuous
                let mut base = points[0].raw();
                for w in points[..=k].windows(2) {
                    let s = w[0].displacement_to(&w[1]);
                    base[0] += s[0];
                    base[1] += s[1];
                }
                let seg = points[k].displacement_to(&points[k + 1]);
                let p = [base[0] + frac * seg[0], base[1] + frac * seg[1]];
                let v = [seg[0] * segs as f64, seg[1] * segs as f64];
                (p, v)
            }
        }
    }

    pub fn point_at(&self, t: f64) -> TorusPoint {
        let (p, _) = self.lifted_at(t);
        TorusPoint::new(&p[..self.dim()])
    }

    pub fn reversed(&self) -> Curve {
        match self {
            Curve::Geodesic {
                displacement,
                ..
            } => {
                let neg: Vec<f64> = displacement.iter().map(|c| -c).collect();
                Curve::Geodesic {
                    start: self.end(),
                    displacement: neg,
                }
            }
            Curve::Sampled { points } => {
                let mut p = points.clone();
                p.reverse();
                Curve::Sampled { points: p }
            }
        }
    }

    /// Samples the curve at `n + 1` uniformly spaced parameters.
    pub fn discretize(&self, n: usize) -> Vec<TorusPoint> {
        (0..=n).map(|i| self.point_at(i as f64 / n as f64)).collect()
    }
}

/// One periodic term `amplitude * sin(2 pi k.x + phase)` added to component `component`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShearTerm {
    pub component: usize,
    pub wave: [i32; 2],
    pub amplitude: f64,
    pub phase: f64,
}

/// The built-in diffeomorphism family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diffeo {
    Identity,
    Translation { offset: Vec<f64> },
    /// `x -> x + eps * s(x)` with `s` a finite sum of [`ShearTerm`]s.
    Shear { eps: f64, terms: Vec<ShearTerm> },
}

impl Diffeo {
    /// The one-dimensional shear `x -> x + eps sin(2 pi x)`.
    pub fn sine_shear(eps: f64) -> Self {
        Diffeo::Shear {
            eps,
            terms: vec![ShearTerm {
                component: 0,
                wave: [1, 0],
                amplitude: 1.0,
                phase: 0.0,
            }],
        }
    }

    /// Upper bound on `sup |eps * s'|`, summing term-wise derivative bounds.
    pub fn shear_bound(&self) -> f64 {
        match self {
            Diffeo::Shear { eps, terms } => terms
                .iter()
                .map(|t| {
                    let k1 = (t.wave[0].abs() + t.wave[1].abs()) as f64;
                    (eps * t.amplitude).abs() * 2.0 * PI * k1
                })
                .sum(),
            _ => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bound = self.shear_bound();
        if bound >= 1.0 {
            return Err(Error::NotInvertible { bound });
        }
        Ok(())
    }

    /// Image of a lifted point; commutes with integer translations.
    pub fn map_lifted(&self, x: [f64; 2], dim: usize) -> [f64; 2] {
        match self {
            Diffeo::Identity => x,
            Diffeo::Translation { offset } => {
                let mut y = x;
                for (mu, c) in offset.iter().enumerate().take(dim) {
                    y[mu] += c;
                }
                y
            }
            Diffeo::Shear { eps, terms } => {
                let mut y = x;
                for t in terms {
                    let arg = 2.0 * PI * (t.wave[0] as f64 * x[0] + t.wave[1] as f64 * x[1]) + t.phase;
                    y[t.component] += eps * t.amplitude * arg.sin();
                }
                y
            }
        }
    }

    /// Jacobian `d sigma` at a lifted point, row `nu` = output component.
    pub fn jacobian(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        let mut j = [[1.0, 0.0], [0.0, 1.0]];
        if let Diffeo::Shear { eps, terms } = self {
            for t in terms {
                let arg = 2.0 * PI * (t.wave[0] as f64 * x[0] + t.wave[1] as f64 * x[1]) + t.phase;
                let c = eps * t.amplitude * 2.0 * PI * arg.cos();
                j[t.component][0] += c * t.wave[0] as f64;
                j[t.component][1] += c * t.wave[1] as f64;
            }
        }
        j
    }

    pub fn apply_point(&self, p: &TorusPoint) -> Result<TorusPoint> {
        self.validate()?;
        let y = self.map_lifted(p.raw(), p.dim());
        Ok(TorusPoint::new(&y[..p.dim()]))
    }

    /// `(x, V) -> (sigma(x), d sigma_x V)`.
    pub fn apply_vector(&self, v: &TangentVector) -> Result<TangentVector> {
        let base = self.apply_point(&v.base)?;
        let j = self.jacobian(v.base.raw());
        let raw = v.raw();
        let dim = v.base.dim();
        let mut w = vec![0.0; dim];
        for (nu, wn) in w.iter_mut().enumerate() {
            for mu in 0..dim {
                *wn += j[nu][mu] * raw[mu];
            }
        }
        Ok(TangentVector::new(base, &w))
    }

    /// Pointwise image of a curve. Translations keep geodesics geodesic; shears
    /// return a sampled curve with `samples` segments.
    pub fn apply_curve(&self, c: &Curve, samples: usize) -> Result<Curve> {
        self.validate()?;
        match (self, c) {
            (Diffeo::Identity, _) => Ok(c.clone()),
            (Diffeo::Translation { .. }, Curve::Geodesic { start, displacement }) => {
                Ok(Curve::Geodesic {
                    start: self.apply_point(start)?,
                    displacement: displacement.clone(),
                })
            }
            _ => {
                let dim = c.dim();
                let pts = (0..=samples.max(1))
                    .map(|i| {
                        let (p, _) = c.lifted_at(i as f64 / samples.max(1) as f64);
                        let y = self.map_lifted(p, dim);
                        TorusPoint::new(&y[..dim])
                    })
                    .collect();
                Curve::sampled(pts)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geodesic_exp_basics() {
        let x = TorusPoint::d1(0.9);
        let v = TangentVector::new(x, &[0.2]);
        assert!(geodesic_exp(&x, &v, 0.0).unwrap().approx_eq(&x, 1e-15));
        assert!(geodesic_exp(&x, &v, 1.0)
            .unwrap()
            .approx_eq(&TorusPoint::d1(0.1), 1e-15));
        let other = TorusPoint::d1(0.3);
        assert!(matches!(
            geodesic_exp(&other, &v, 1.0),
            Err(Error::BaseMismatch)
        ));
    }

    #[test]
    fn geodesic_flow_property() {
        let x = TorusPoint::d2(0.3, 0.95);
        let v = TangentVector::new(x, &[0.7, -1.3]);
        let (s, t) = (0.4, 1.9);
        let direct = geodesic_exp(&x, &v, s + t).unwrap();
        let mid = geodesic_exp(&x, &v, s).unwrap();
        let v_mid = TangentVector::new(mid, v.components());
        let two_step = geodesic_exp(&mid, &v_mid, t).unwrap();
        assert!(direct.approx_eq(&two_step, 1e-12));
    }

    #[test]
    fn displacement_prefers_positive_lift_at_antipode() {
        assert_eq!(circle_displacement(0.0, 0.5), 0.5);
        assert_eq!(circle_displacement(0.5, 0.0), 0.5);
        assert!((circle_displacement(0.9, 0.1) - 0.2).abs() < 1e-15);
        assert!((circle_displacement(0.1, 0.9) + 0.2).abs() < 1e-15);
    }

    #[test]
    fn curves_end_where_their_displacement_says() {
        let c = Curve::geodesic(TorusPoint::d2(0.8, 0.1), &[0.4, -0.3]);
        assert!(c.end().approx_eq(&TorusPoint::d2(0.2, 0.8), 1e-12));
        assert!(c.reversed().end().approx_eq(&c.start(), 1e-12));
        let s = Curve::sampled(vec![
            TorusPoint::d1(0.9),
            TorusPoint::d1(0.1),
            TorusPoint::d1(0.3),
        ])
        .unwrap();
        assert!((s.total_displacement()[0] - 0.4).abs() < 1e-12);
        let (p, v) = s.lifted_at(0.75);
        assert!((p[0] - 1.2).abs() < 1e-12);
        assert!((v[0] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn identity_and_translation_diffeos() {
        let p = TorusPoint::d2(0.25, 0.5);
        assert_eq!(Diffeo::Identity.apply_point(&p).unwrap(), p);
        let tr = Diffeo::Translation {
            offset: vec![0.5, 0.75],
        };
        let c = Curve::geodesic(p, &[0.1, 0.2]);
        match tr.apply_curve(&c, 8).unwrap() {
            Curve::Geodesic {
                start,
                displacement,
            } => {
                assert!(start.approx_eq(&TorusPoint::d2(0.75, 0.25), 1e-15));
                assert_eq!(displacement, vec![0.1, 0.2]);
            }
            other => panic!("translation should keep geodesics, got {other:?}"),
        }
    }

    #[test]
    fn shear_differential_matches_finite_differences() {
        let eps = 0.1;
        let sigma = Diffeo::sine_shear(eps);
        for x in [0.0, 0.13, 0.5, 0.77] {
            let v = TangentVector::new(TorusPoint::d1(x), &[1.0]);
            let dv = sigma.apply_vector(&v).unwrap().components()[0];
            assert!((dv - (1.0 + 2.0 * PI * eps * (2.0 * PI * x).cos())).abs() < 1e-14);
            let h = 1e-6;
            let fd = (sigma.map_lifted([x + h, 0.0], 1)[0] - sigma.map_lifted([x - h, 0.0], 1)[0])
                / (2.0 * h);
            assert!((dv - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn shear_must_be_invertible() {
        let sigma = Diffeo::sine_shear(0.2);
        assert!(matches!(
            sigma.apply_point(&TorusPoint::d1(0.1)),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn shear_curve_keeps_mapped_endpoints() {
        let sigma = Diffeo::sine_shear(0.1);
        let c = Curve::geodesic(TorusPoint::d1(0.2), &[0.3]);
        let img = sigma.apply_curve(&c, 32).unwrap();
        assert!(img
            .start()
            .approx_eq(&sigma.apply_point(&c.start()).unwrap(), 1e-12));
        assert!(img
            .end()
            .approx_eq(&sigma.apply_point(&c.end()).unwrap(), 1e-12));
    }
}
