//! The concrete groupoids used throughout: the pair groupoid `M x M`, the
//! tangent bundle `TM`, the structure group `G` and the product `M x M x G`,
//! plus the tangent-groupoid gluing map and the uniform Haar system.

use serde::{Deserialize, Serialize};

use crate::grid::Grid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{haar_draw, Group, GroupElement};
use crate::torus::{geodesic_exp, TangentVector, TorusPoint, POINT_TOL};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum GroupoidElement {
    Pair { x: TorusPoint, y: TorusPoint },
    Tangent { v: TangentVector },
    Group { g: GroupElement },
    Product { x: TorusPoint, y: TorusPoint, g: GroupElement },
}

/// An object (unit) of one of the groupoids. The group has a single object.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Object {
    Point(TorusPoint),
    Single(Group),
}

impl Object {
    fn approx_eq(&self, other: &Object) -> bool {
        match (self, other) {
            (Object::Point(a), Object::Point(b)) => a.approx_eq(b, POINT_TOL),
            (Object::Single(a), Object::Single(b)) => a == b,
            _ => false,
        }
    }
}

impl GroupoidElement {
    pub fn source(&self) -> Object {
        match self {
            GroupoidElement::Pair { x, .. } | GroupoidElement::Product { x, .. } => {
                Object::Point(*x)
            }
            GroupoidElement::Tangent { v } => Object::Point(v.base),
            GroupoidElement::Group { g } => Object::Single(g.group()),
        }
    }

    pub fn range(&self) -> Object {
        match self {
            GroupoidElement::Pair { y, .. } | GroupoidElement::Product { y, .. } => {
                Object::Point(*y)
            }
            GroupoidElement::Tangent { v } => Object::Point(v.base),
            GroupoidElement::Group { g } => Object::Single(g.group()),
        }
    }

    /// The identity arrow at the source of `self`, in the same groupoid.
    pub fn source_identity(&self) -> GroupoidElement {
        match self {
            GroupoidElement::Pair { x, .. } => GroupoidElement::Pair { x: *x, y: *x },
            GroupoidElement::Tangent { v } => GroupoidElement::Tangent { v: v.scaled(0.0) },
            GroupoidElement::Group { g } => GroupoidElement::Group {
                g: g.group().identity(),
            },
            GroupoidElement::Product { x, g, .. } => GroupoidElement::Product {
                x: *x,
                y: *x,
                g: g.group().identity(),
            },
        }
    }

    pub fn range_identity(&self) -> GroupoidElement {
        self.inverse().source_identity()
    }

    pub fn inverse(&self) -> GroupoidElement {
        match self {
            GroupoidElement::Pair { x, y } => GroupoidElement::Pair { x: *y, y: *x },
            GroupoidElement::Tangent { v } => GroupoidElement::Tangent { v: v.scaled(-1.0) },
            GroupoidElement::Group { g } => GroupoidElement::Group { g: g.inverse() },
            GroupoidElement::Product { x, y, g } => GroupoidElement::Product {
                x: *y,
                y: *x,
                g: g.inverse(),
            },
        }
    }

    /// Distance between two elements of the same variant (infinite otherwise).
    pub fn distance(&self, other: &GroupoidElement) -> f64 {
        use GroupoidElement::*;
        match (self, other) {
            (Pair { x: a, y: b }, Pair { x: c, y: d }) => a.distance(c).max(b.distance(d)),
            (Tangent { v }, Tangent { v: w }) => {
                let dv: f64 = v
                    .components()
                    .iter()
                    .zip(w.components())
                    .map(|(p, q)| (p - q).abs())
                    .fold(0.0, f64::max);
                v.base.distance(&w.base).max(dv)
            }
            (Group { g }, Group { g: h }) => g.matrix().distance(h.matrix()),
            (Product { x: a, y: b, g }, Product { x: c, y: d, g: h }) => a
                .distance(c)
                .max(b.distance(d))
                .max(g.matrix().distance(h.matrix())),
            _ => f64::INFINITY,
        }
    }
}

/// Composition `a . b`, defined when `range(a) = source(b)`.
pub fn compose(a: &GroupoidElement, b: &GroupoidElement) -> Result<GroupoidElement> {
    use GroupoidElement::*;
    if std::mem::discriminant(a) != std::mem::discriminant(b) {
        return Err(Error::VariantMismatch);
    }
    if !a.range().approx_eq(&b.source()) {
        return Err(match (a, b) {
            (Group { .. }, Group { .. }) => Error::GroupMismatch,
            _ => Error::NotComposable,
        });
    }
    Ok(match (a, b) {
        (Pair { x, .. }, Pair { y: z, .. }) => Pair { x: *x, y: *z },
        (Tangent { v }, Tangent { v: w }) => {
            let sum: Vec<f64> = v
                .components()
                .iter()
                .zip(w.components())
                .map(|(p, q)| p + q)
                .collect();
            Tangent {
                v: TangentVector::new(v.base, &sum),
            }
        }
        (Group { g }, Group { g: h }) => Group { g: g.mul(h)? },
        (Product { x, g, .. }, Product { y: z, g: h, .. }) => Product {
            x: *x,
            y: *z,
            g: g.mul(h)?,
        },
        _ => unreachable!("variants checked above"),
    })
}

/// A point of the tangent groupoid `A(G) x {0}  u  G x (0, 1]` for the pair
/// groupoid of the torus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum TangentGroupoidPoint {
    Zero { v: TangentVector },
    Hbar { x: TorusPoint, y: TorusPoint, hbar: f64 },
}

pub fn check_hbar(hbar: f64) -> Result<()> {
    if hbar > 0.0 && hbar <= 1.0 {
        Ok(())
    } else {
        Err(Error::HbarOutOfRange(hbar))
    }
}

/// The gluing chart `(x, V) -> (x, exp(hbar V), hbar)`.
pub fn glue(p: &TangentGroupoidPoint, hbar: f64) -> Result<TangentGroupoidPoint> {
    check_hbar(hbar)?;
    match p {
        TangentGroupoidPoint::Zero { v } => Ok(TangentGroupoidPoint::Hbar {
            x: v.base,
            y: geodesic_exp(&v.base, v, hbar)?,
            hbar,
        }),
        TangentGroupoidPoint::Hbar { .. } => Err(Error::InvalidArgument(
            "glue expects a point of the zero fibre".into(),
        )),
    }
}

/// Uniform Haar system on the pair groupoid: every fibre carries the grid
/// quadrature with weight `1 / |grid|`.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarSystem {
    pub grid_points: Vec<TorusPoint>,
    pub weight: f64,
}

impl HaarSystem {
    pub fn uniform(grid: Grid) -> Self {
        HaarSystem {
            grid_points: grid.points(),
            weight: grid.weight(),
        }
    }

    pub fn total_volume(&self) -> f64 {
        self.weight * self.grid_points.len() as f64
    }

    /// `int f(x, y) d lambda^x(y)` over the fibre above `x`.
    pub fn integrate_fibre<F: Fn(&TorusPoint) -> f64>(&self, f: F) -> f64 {
        self.grid_points.iter().map(|y| self.weight * f(y)).sum()
    }
}

/// The four groupoids, for random axiom checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Pair,
    Tangent,
    Group,
    Product,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Pair, Variant::Tangent, Variant::Group, Variant::Product];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Pair => "pair",
            Variant::Tangent => "tangent",
            Variant::Group => "group",
            Variant::Product => "product",
        }
    }
}

/// A random composable triple `(a, b, c)`: `range(a) = source(b)` and
/// `range(b) = source(c)`.
pub fn random_composable<R: Rng + ?Sized>(
    variant: Variant,
    group: Group,
    dim: usize,
    rng: &mut R,
) -> [GroupoidElement; 3] {
    let mut point = || {
        let c: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..1.0)).collect();
        TorusPoint::new(&c)
    };
    let pts = [point(), point(), point(), point()];
    std::array::from_fn(|i| match variant {
        Variant::Pair => GroupoidElement::Pair {
            x: pts[i],
            y: pts[i + 1],
        },
        Variant::Tangent => {
            let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
            GroupoidElement::Tangent {
                v: TangentVector::new(pts[0], &v),
            }
        }
        Variant::Group => GroupoidElement::Group {
            g: haar_draw(group, rng),
        },
        Variant::Product => GroupoidElement::Product {
            x: pts[i],
            y: pts[i + 1],
            g: haar_draw(group, rng),
        },
    })
}

/// Largest defects of the groupoid laws over random composable triples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub variant: Variant,
    pub tuples: usize,
    /// `|(ab)c - a(bc)|`.
    pub associativity: f64,
    /// `|e_s(a) a - a|` and `|a e_r(a) - a|`.
    pub identity: f64,
    /// `|a a^-1 - e_s(a)|` and `|a^-1 a - e_r(a)|`.
    pub inverse: f64,
}

impl AxiomReport {
    pub fn max_defect(&self) -> f64 {
        self.associativity.max(self.identity).max(self.inverse)
    }
}

pub fn axiom_check(variant: Variant, group: Group, dim: usize, tuples: usize, seed: u64) -> Result<AxiomReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AxiomReport {
        variant,
        tuples,
        associativity: 0.0,
        identity: 0.0,
        inverse: 0.0,
    };
    for _ in 0..tuples {
        let [a, b, c] = random_composable(variant, group, dim, &mut rng);
        let left = compose(&compose(&a, &b)?, &c)?;
        let right = compose(&a, &compose(&b, &c)?)?;
        report.associativity = report.associativity.max(left.distance(&right));
        let id = compose(&a.source_identity(), &a)?
            .distance(&a)
            .max(compose(&a, &a.range_identity())?.distance(&a));
        report.identity = report.identity.max(id);
        let inv = a.inverse();
        let d = compose(&a, &inv)?
            .distance(&a.source_identity())
            .max(compose(&inv, &a)?.distance(&a.range_identity()));
        report.inverse = report.inverse.max(d);
    }
    Ok(report)
}
