//! q-connections: a classical connection `A_0` paired with a two-point family
//! `hbar -> A_hbar(x, y)` glued to it by `A_hbar(x, exp hbar V) ~ exp(hbar A_0(x, V))`.
//!
//! Families are lazy rule trees, so every check can probe arbitrary `(x, V, hbar)`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gauge::GaugeField;
use crate::group::{exp_map, Group, GroupElement};
use crate::holonomy::{gauge_transform_fit, pullback_fit, segment_holonomy, SmoothConnection};
use crate::linalg::CMat;
use crate::stats::loglog_slope;
use crate::torus::{Diffeo, TangentVector, TorusPoint};
use crate::{Error, Result};

/// Default finite-difference steps for `hbar`-derivatives at zero.
pub const FD_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Default holonomy steps used by [`Family::ExactHolonomy`].
pub const EXACT_STEPS: usize = 64;

/// Caller-supplied two-point rule `(x, y, hbar) -> A_hbar(x, y)`.
pub type CustomRule = Arc<dyn Fn(&TorusPoint, &TorusPoint, f64) -> GroupElement + Send + Sync>;

#[derive(Clone)]
pub enum Family {
    /// Holonomy of `a0` along the shortest geodesic from `x` to `y`.
    ExactHolonomy { steps: usize },
    Custom(CustomRule),
    /// Pointwise product of two families.
    Product(Box<QConnection>, Box<QConnection>),
    /// `g(x) A(x, y) g(y)^-1`.
    Gauge(GaugeField, Box<QConnection>),
    /// `A(sigma x, sigma y)`.
    Diffeo(Diffeo, Box<QConnection>),
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::ExactHolonomy { steps } => write!(f, "ExactHolonomy({steps})"),
            Family::Custom(_) => write!(f, "Custom"),
            Family::Product(a, b) => write!(f, "Product({:?}, {:?})", a.family, b.family),
            Family::Gauge(_, q) => write!(f, "Gauge({:?})", q.family),
            Family::Diffeo(s, q) => write!(f, "Diffeo({s:?}, {:?})", q.family),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QConnection {
    pub a0: SmoothConnection,
    pub family: Family,
    /// Refit residual accumulated when `a0` had to be re-expanded in a Fourier band.
    pub a0_residual: f64,
}

impl QConnection {
    /// The embedding `A -> (A, hol_geodesic(A))`.
    pub fn exact(a0: SmoothConnection) -> Self {
        Self::exact_with_steps(a0, EXACT_STEPS)
    }

    pub fn exact_with_steps(a0: SmoothConnection, steps: usize) -> Self {
        QConnection {
            a0,
            family: Family::ExactHolonomy {
                steps: steps.max(1),
            },
            a0_residual: 0.0,
        }
    }

    pub fn custom(a0: SmoothConnection, rule: CustomRule) -> Self {
        QConnection {
            a0,
            family: Family::Custom(rule),
            a0_residual: 0.0,
        }
    }

    pub fn group(&self) -> Group {
        self.a0.group()
    }

    pub fn dim(&self) -> usize {
        self.a0.dim()
    }

    /// `A_hbar(x, y)`.
    pub fn value(&self, x: &TorusPoint, y: &TorusPoint, hbar: f64) -> GroupElement {
        match &self.family {
            Family::ExactHolonomy { steps } => {
                let d = x.displacement_to(y);
                segment_holonomy(&self.a0, x.raw(), d, *steps)
            }
            Family::Custom(rule) => rule(x, y, hbar),
            Family::Product(a, b) => a.value(x, y, hbar) * b.value(x, y, hbar),
            Family::Gauge(g, q) => g.value(x) * q.value(x, y, hbar) * g.value(y).inverse(),
            Family::Diffeo(s, q) => {
                let dim = x.dim();
                let sx = s.map_lifted(x.raw(), dim);
                let sy = s.map_lifted(y.raw(), dim);
                q.value(
                    &TorusPoint::new(&sx[..dim]),
                    &TorusPoint::new(&sy[..dim]),
                    hbar,
                )
            }
        }
    }

    /// `A_hbar(x, exp(hbar V))`, extended to negative `hbar` by
    /// `A_|hbar|(x, exp(hbar V))`.
    pub fn along(&self, v: &TangentVector, hbar: f64) -> GroupElement {
        let x = v.base;
        let step: Vec<f64> = v.components().iter().map(|c| c * hbar).collect();
        self.value(&x, &x.translate(&step), hbar.abs())
    }
}

/// Largest tangent component drawn by [`random_samples`]; keeps `hbar V` well
/// inside the injectivity radius for every `hbar <= 1/2`.
pub const SAMPLE_VMAX: f64 = 0.5;

/// Uniform base points and tangent components in `[-SAMPLE_VMAX, SAMPLE_VMAX]`.
pub fn random_samples<R: Rng + ?Sized>(dim: usize, count: usize, rng: &mut R) -> Vec<TangentVector> {
    (0..count)
        .map(|_| {
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..1.0)).collect();
            let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-SAMPLE_VMAX..SAMPLE_VMAX)).collect();
            TangentVector::new(TorusPoint::new(&x), &v)
        })
        .collect()
}

/// One defect series over a parameter sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectSeries {
    pub params: Vec<f64>,
    /// Max over samples at each parameter.
    pub defects: Vec<f64>,
    pub max: f64,
    /// Log-log slope; `None` when the defects sit at round-off.
    pub slope: Option<f64>,
}

impl DefectSeries {
    fn new(params: &[f64], defects: Vec<f64>) -> Self {
        DefectSeries {
            params: params.to_vec(),
            max: defects.iter().cloned().fold(0.0, f64::max),
            slope: loglog_slope(params, &defects),
            defects,
        }
    }
}

/// Max over samples of `f(sample, param)`, for each parameter.
fn sweep<F>(samples: &[TangentVector], params: &[f64], f: F) -> Vec<f64>
where
    F: Fn(&TangentVector, f64) -> f64 + Sync,
{
    params
        .iter()
        .map(|&p| {
            samples
                .par_iter()
                .map(|v| f(v, p))
                .reduce(|| 0.0, f64::max)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlueReport {
    pub samples: usize,
    /// `|A_hbar(x, exp hbar V) - exp(hbar A_0(x, V))|`.
    pub gluing: DefectSeries,
    /// `|A_hbar(x, x) - I|`.
    pub diagonal: DefectSeries,
    /// `|A_hbar(x, y) A_hbar(y, x) - I|` with `y = exp(hbar V)`.
    pub reversal: DefectSeries,
}

pub fn glue_check(q: &QConnection, samples: &[TangentVector], hbars: &[f64]) -> Result<GlueReport> {
    for &h in hbars {
        crate::groupoid::check_hbar(h)?;
    }
    let id = CMat::identity(q.group().matrix_dim());
    let gluing = sweep(samples, hbars, |v, h| {
        let lhs = q.along(v, h);
        let rhs = exp_map(&q.a0.evaluate(&v.base, v).expect("sample base").scale(h));
        lhs.matrix().distance(rhs.matrix())
    });
    let diagonal = sweep(samples, hbars, |v, h| {
        q.value(&v.base, &v.base, h).matrix().distance(&id)
    });
    let reversal = sweep(samples, hbars, |v, h| {
        let x = v.base;
        let step: Vec<f64> = v.components().iter().map(|c| c * h).collect();
        let y = x.translate(&step);
        (q.value(&x, &y, h) * q.value(&y, &x, h)).matrix().distance(&id)
    });
    Ok(GlueReport {
        samples: samples.len(),
        gluing: DefectSeries::new(hbars, gluing),
        diagonal: DefectSeries::new(hbars, diagonal),
        reversal: DefectSeries::new(hbars, reversal),
    })
}

/// `(F(h) - F(-h)) / 2h` for `F(hbar) = A_hbar(x, exp hbar V)`.
pub fn central_derivative(q: &QConnection, v: &TangentVector, h: f64) -> CMat {
    (*q.along(v, h).matrix() - *q.along(v, -h).matrix()).scale_re(0.5 / h)
}

/// Comparison of the `hbar`-derivative at zero with a reference algebra element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub samples: usize,
    /// Central-difference defects per step size.
    pub central: DefectSeries,
    /// Max over samples of the Richardson-extrapolated defect from the two smallest steps.
    pub richardson: f64,
}

fn derivative_report<R>(q: &QConnection, samples: &[TangentVector], steps: &[f64], reference: R) -> Result<DerivativeReport>
where
    R: Fn(&TangentVector) -> Result<CMat> + Sync,
{
    if steps.is_empty() || steps.iter().any(|h| !(*h > 0.0 && *h <= 1.0)) {
        return Err(Error::InvalidArgument("finite-difference steps must lie in (0, 1]".into()));
    }
    let refs = samples
        .par_iter()
        .map(&reference)
        .collect::<Result<Vec<_>>>()?;
    let central = steps
        .iter()
        .map(|&h| {
            samples
                .par_iter()
                .zip(&refs)
                .map(|(v, r)| central_derivative(q, v, h).distance(r))
                .reduce(|| 0.0, f64::max)
        })
        .collect();
    let mut sorted = steps.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let richardson_defect = if sorted.len() >= 2 {
        let (h1, h2) = (sorted[sorted.len() - 2], sorted[sorted.len() - 1]);
        samples
            .par_iter()
            .zip(&refs)
            .map(|(v, r)| {
                let d1 = central_derivative(q, v, h1);
                let d2 = central_derivative(q, v, h2);
                // general step ratio: leading error C h^2
                let ratio = (h1 / h2).powi(2);
                let ext = (d2.scale_re(ratio) - d1).scale_re(1.0 / (ratio - 1.0));
                ext.distance(r)
            })
            .reduce(|| 0.0, f64::max)
    } else {
        f64::NAN
    };
    Ok(DerivativeReport {
        samples: samples.len(),
        central: DefectSeries::new(steps, central),
        richardson: richardson_defect,
    })
}

/// `hbar`-derivative of `A_hbar(x, exp hbar V)` at zero against `A_0(x, V)`.
pub fn derivative_check(q: &QConnection, samples: &[TangentVector], steps: &[f64]) -> Result<DerivativeReport> {
    derivative_report(q, samples, steps, |v| Ok(*q.a0.evaluate(&v.base, v)?.matrix()))
}

/// Pointwise product family with the sum connection at level zero.
pub fn q_product(q1: &QConnection, q2: &QConnection) -> Result<QConnection> {
    if q1.group() != q2.group() {
        return Err(Error::GroupMismatch);
    }
    Ok(QConnection {
        a0: q1.a0.add(&q2.a0)?,
        family: Family::Product(Box::new(q1.clone()), Box::new(q2.clone())),
        a0_residual: q1.a0_residual + q2.a0_residual,
    })
}

/// Band used when re-expanding a gauge-transformed `A_0`.
fn gauge_band(a: &SmoothConnection, g: &GaugeField) -> usize {
    if g.is_constant() {
        a.band()
    } else {
        (a.band() + 12 * g.band().max(1) + 8).min(40)
    }
}

/// `(g A_hbar)(x, y) = g(x) A_hbar(x, y) g(y)^-1`, with `A_0` transformed by the
/// classical action and re-fitted.
pub fn gauge_act_hbar(g: &GaugeField, q: &QConnection) -> Result<QConnection> {
    if g.group() != q.group() {
        return Err(Error::GroupMismatch);
    }
    let refit = gauge_transform_fit(&q.a0, g, gauge_band(&q.a0, g))?;
    Ok(QConnection {
        a0: refit.connection,
        family: Family::Gauge(g.clone(), Box::new(q.clone())),
        a0_residual: q.a0_residual + refit.residual,
    })
}

/// Derivative at zero of the gauge-acted family against the exact pointwise
/// classical action `g A_0 g^-1 + g <d g^-1, V>`.
pub fn compatibility_check(
    g: &GaugeField,
    q: &QConnection,
    samples: &[TangentVector],
    steps: &[f64],
) -> Result<DerivativeReport> {
    if g.group() != q.group() {
        return Err(Error::GroupMismatch);
    }
    let acted = QConnection {
        a0: q.a0.clone(),
        family: Family::Gauge(g.clone(), Box::new(q.clone())),
        a0_residual: q.a0_residual,
    };
    derivative_report(&acted, samples, steps, |v| {
        Ok(*g.act_on_connection_at(&q.a0, v)?.matrix())
    })
}

/// `(sigma A_hbar)(x, y) = A_hbar(sigma x, sigma y)` and `A_0` pulled back.
pub fn diff_act(sigma: &Diffeo, q: &QConnection) -> Result<QConnection> {
    sigma.validate()?;
    let band = match sigma {
        Diffeo::Shear { .. } => (2 * q.a0.band() + 12).min(32),
        _ => q.a0.band(),
    };
    let refit = pullback_fit(&q.a0, sigma, band)?;
    Ok(QConnection {
        a0: refit.connection,
        family: Family::Diffeo(sigma.clone(), Box::new(q.clone())),
        a0_residual: q.a0_residual + refit.residual,
    })
}

/// Distance between the diffeomorphism-acted family and the exact-holonomy
/// family of the pulled-back connection. The first follows image curves, the
/// second geodesics, so the two agree only to first order in `hbar`.
pub fn diff_image_defect(
    sigma: &Diffeo,
    q: &QConnection,
    samples: &[TangentVector],
    hbars: &[f64],
) -> Result<DefectSeries> {
    let acted = diff_act(sigma, q)?;
    let steps = match q.family {
        Family::ExactHolonomy { steps } => steps,
        _ => EXACT_STEPS,
    };
    let direct = QConnection::exact_with_steps(acted.a0.clone(), steps);
    let defects = sweep(samples, hbars, |v, h| {
        acted.along(v, h).matrix().distance(direct.along(v, h).matrix())
    });
    Ok(DefectSeries::new(hbars, defects))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::LieField;
    use crate::group::AlgebraElement;
    use crate::linalg::C64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn hbars() -> Vec<f64> {
        (1..=6).map(|k| 1.0 / (1u32 << k) as f64).collect()
    }

    fn samples(dim: usize, n: usize, seed: u64) -> Vec<TangentVector> {
        random_samples(dim, n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn u1_constant_glues_exactly() {
        let a = SmoothConnection::constant(&[
            AlgebraElement::from_coords(Group::U1, &[1.3]),
            AlgebraElement::from_coords(Group::U1, &[-0.4]),
        ])
        .unwrap();
        let r = glue_check(&QConnection::exact(a), &samples(2, 20, 1), &hbars()).unwrap();
        assert!(r.gluing.max <= 1e-12, "{}", r.gluing.max);
        assert!(r.diagonal.max == 0.0);
        assert!(r.reversal.max <= 1e-12);
    }

    #[test]
    fn su2_gluing_is_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = SmoothConnection::random(Group::SU2, 2, 1, 1.0, &mut rng);
        let r = glue_check(&QConnection::exact(a), &samples(2, 20, 3), &hbars()).unwrap();
        assert!(r.gluing.slope.unwrap() >= 1.9, "{:?}", r.gluing);
        assert!(r.reversal.max <= 1e-10);
    }

    #[test]
    fn product_derivative_is_the_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = QConnection::exact(SmoothConnection::random(Group::SU2, 2, 2, 1.0, &mut rng));
        let b = QConnection::exact(SmoothConnection::random(Group::SU2, 2, 1, 1.0, &mut rng));
        let p = q_product(&a, &b).unwrap();
        let r = derivative_check(&p, &samples(2, 30, 5), &FD_STEPS).unwrap();
        assert!(r.richardson <= 1e-6, "{r:?}");
    }

    #[test]
    fn product_with_trivial_is_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = QConnection::exact(SmoothConnection::random(Group::SU2, 1, 2, 1.0, &mut rng));
        let t = QConnection::exact(SmoothConnection::zero(Group::SU2, 1));
        let p = q_product(&a, &t).unwrap();
        for v in samples(1, 10, 7) {
            let d = p.along(&v, 0.3).matrix().distance(a.along(&v, 0.3).matrix());
            assert!(d < 1e-15);
        }
    }

    #[test]
    fn u1_product_is_exponential_of_sum_on_geodesics() {
        let a = SmoothConnection::constant(&[AlgebraElement::from_coords(Group::U1, &[0.7])]).unwrap();
        let b = SmoothConnection::constant(&[AlgebraElement::from_coords(Group::U1, &[-2.1])]).unwrap();
        let p = q_product(&QConnection::exact(a), &QConnection::exact(b)).unwrap();
        for v in samples(1, 10, 8) {
            let h = 0.2;
            let expect = GroupElement::u1(h * (0.7 - 2.1) * v.components()[0]);
            assert!(p.along(&v, h).matrix().distance(expect.matrix()) < 1e-13);
        }
    }

    #[test]
    fn gauge_action_is_an_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = QConnection::exact(SmoothConnection::random(Group::SU2, 1, 1, 1.0, &mut rng));
        let g = GaugeField::random(Group::SU2, 1, 1, 0.5, &mut rng);
        let h = GaugeField::random(Group::SU2, 1, 1, 0.5, &mut rng);
        let left = gauge_act_hbar(&g, &gauge_act_hbar(&h, &q).unwrap()).unwrap();
        let right = gauge_act_hbar(&g.compose(&h).unwrap(), &q).unwrap();
        let id = gauge_act_hbar(&GaugeField::identity(Group::SU2, 1), &q).unwrap();
        for v in samples(1, 10, 10) {
            let d = left.along(&v, 0.25).matrix().distance(right.along(&v, 0.25).matrix());
            assert!(d <= 1e-12);
            assert!(id.along(&v, 0.25).matrix().distance(q.along(&v, 0.25).matrix()) <= 1e-15);
            let diag = left.value(&v.base, &v.base, 0.5);
            assert!(diag.matrix().distance(&CMat::identity(2)) < 1e-12);
        }
    }

    #[test]
    fn constant_gauge_compatibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = QConnection::exact(SmoothConnection::random(Group::SU2, 2, 1, 1.0, &mut rng));
        let c = crate::group::haar_sample(Group::SU2, 12, 1)[0];
        let r = compatibility_check(&GaugeField::constant(c, 2), &q, &samples(2, 10, 13), &FD_STEPS).unwrap();
        assert!(r.richardson <= 1e-8, "{r:?}");
    }

    #[test]
    fn u1_gauge_compatibility_closed_form() {
        // g = exp(i 0.5 sin(2 pi x)): the shift is -i pi cos(2 pi x) V
        let y = LieField::from_modes(
            Group::U1,
            1,
            vec![([1, 0], vec![C64::new(0.0, -0.5)])],
        )
        .unwrap();
        let g = GaugeField::exp_of(y);
        let a = SmoothConnection::constant(&[AlgebraElement::from_coords(Group::U1, &[0.8])]).unwrap();
        let q = QConnection::exact(a);
        let s = samples(1, 20, 14);
        let r = compatibility_check(&g, &q, &s, &FD_STEPS).unwrap();
        assert!(r.richardson <= 1e-6, "{r:?}");
        for v in &s {
            let x = v.base.coords()[0];
            let expect = 0.8 * v.components()[0] - PI * (2.0 * PI * x).cos() * v.components()[0];
            let got = g.act_on_connection_at(&q.a0, v).unwrap().matrix().get(0, 0).im;
            assert!((got - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn su2_gauge_compatibility_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let q = QConnection::exact(SmoothConnection::random(Group::SU2, 2, 1, 1.0, &mut rng));
        let g = GaugeField::random(Group::SU2, 2, 1, 1.0, &mut rng);
        let r = compatibility_check(&g, &q, &samples(2, 20, 16), &FD_STEPS).unwrap();
        assert!(r.central.slope.unwrap() >= 1.9, "{r:?}");
        let acted = gauge_act_hbar(&g, &q).unwrap();
        assert!(acted.a0_residual < 1e-8, "{}", acted.a0_residual);
    }

    #[test]
    fn diffeo_actions() {
        let a = SmoothConnection::constant(&[AlgebraElement::from_coords(Group::U1, &[0.9])]).unwrap();
        let q = QConnection::exact(a);
        let s = samples(1, 10, 17);
        let id = diff_act(&Diffeo::Identity, &q).unwrap();
        let tr = diff_act(&Diffeo::Translation { offset: vec![0.37] }, &q).unwrap();
        for v in &s {
            let base = q.along(v, 0.2);
            assert!(id.along(v, 0.2).matrix().distance(base.matrix()) < 1e-15);
            assert!(tr.along(v, 0.2).matrix().distance(base.matrix()) < 1e-12);
        }
        assert!(matches!(
            diff_act(&Diffeo::sine_shear(0.5), &q),
            Err(Error::NotInvertible { .. })
        ));
        let shear = Diffeo::sine_shear(0.05);
        let defect = diff_image_defect(&shear, &q, &s, &hbars()).unwrap();
        assert!(defect.max.is_finite());
        let acted = diff_act(&shear, &q).unwrap();
        let glue = glue_check(&acted, &s, &hbars()).unwrap();
        assert!(glue.gluing.slope.unwrap() >= 1.8, "{glue:?}");
    }

    #[test]
    fn embedding_separates_connections() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..5 {
            let a = QConnection::exact(SmoothConnection::random(Group::SU2, 1, 2, 1.0, &mut rng));
            let b = QConnection::exact(SmoothConnection::random(Group::SU2, 1, 2, 1.0, &mut rng));
            let gap = samples(1, 10, 19)
                .iter()
                .map(|v| a.along(v, 0.5).matrix().distance(b.along(v, 0.5).matrix()))
                .fold(0.0, f64::max);
            assert!(gap > 0.0);
        }
    }

    #[test]
    fn report_serializes() {
        let a = SmoothConnection::zero(Group::U1, 1);
        let r = glue_check(&QConnection::exact(a), &samples(1, 3, 20), &hbars()).unwrap();
        let back: GlueReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
