//! Cylinder functions on the finite levels `G^{|Gamma_j|}` of a graph system,
//! their pullbacks along refinement, Haar integration and the density
//! experiment built on the surjectivity construction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{lattice_edge_index, Graph, GraphSystem};
use crate::group::{haar_draw, haar_sample, Group, GroupElement};
use crate::holonomy::HolonomyAssignment;
use crate::linalg::{CMat, C64};
use crate::stats::complex_mean_stderr;
use crate::surjectivity::surjectivity_construct;
use crate::{Error, Result};

/// Matrix-valued words in the edge slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum MatExpr {
    Slot { edge: usize },
    Inverse { of: Box<MatExpr> },
    /// Ordered product, first factor on the left.
    Product { factors: Vec<MatExpr> },
}

impl MatExpr {
    pub fn slot(edge: usize) -> Self {
        MatExpr::Slot { edge }
    }

    pub fn inv(self) -> Self {
        MatExpr::Inverse { of: Box::new(self) }
    }

    pub fn word(factors: Vec<MatExpr>) -> Self {
        MatExpr::Product { factors }
    }

    fn eval(&self, values: &[GroupElement], n: usize) -> CMat {
        match self {
            MatExpr::Slot { edge } => *values[*edge].matrix(),
            MatExpr::Inverse { of } => of.eval(values, n).adjoint(),
            MatExpr::Product { factors } => factors
                .iter()
                .fold(CMat::identity(n), |acc, f| acc * f.eval(values, n)),
        }
    }

    fn max_slot(&self) -> Option<usize> {
        match self {
            MatExpr::Slot { edge } => Some(*edge),
            MatExpr::Inverse { of } => of.max_slot(),
            MatExpr::Product { factors } => factors.iter().filter_map(MatExpr::max_slot).max(),
        }
    }

    fn substitute(&self, children: &dyn Fn(usize) -> Result<Vec<usize>>) -> Result<MatExpr> {
        Ok(match self {
            MatExpr::Slot { edge } => MatExpr::word(children(*edge)?.into_iter().map(MatExpr::slot).collect()),
            MatExpr::Inverse { of } => of.substitute(children)?.inv(),
            MatExpr::Product { factors } => MatExpr::word(
                factors
                    .iter()
                    .map(|f| f.substitute(children))
                    .collect::<Result<_>>()?,
            ),
        })
    }
}

/// Scalar expressions over matrix words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Expr {
    Const { re: f64, im: f64 },
    Trace { of: MatExpr },
    Coeff { of: MatExpr, row: usize, col: usize },
    Re { of: Box<Expr> },
    Im { of: Box<Expr> },
    Conj { of: Box<Expr> },
    Abs2 { of: Box<Expr> },
    Add { terms: Vec<Expr> },
    Mul { factors: Vec<Expr> },
    Scale { by: f64, of: Box<Expr> },
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr::Const { re: c, im: 0.0 }
    }

    pub fn trace(of: MatExpr) -> Self {
        Expr::Trace { of }
    }

    pub fn re(self) -> Self {
        Expr::Re { of: Box::new(self) }
    }

    pub fn abs2(self) -> Self {
        Expr::Abs2 { of: Box::new(self) }
    }

    pub fn scale(self, by: f64) -> Self {
        Expr::Scale { by, of: Box::new(self) }
    }

    fn eval(&self, values: &[GroupElement], n: usize) -> C64 {
        match self {
            Expr::Const { re, im } => C64::new(*re, *im),
            Expr::Trace { of } => of.eval(values, n).trace(),
            Expr::Coeff { of, row, col } => of.eval(values, n).get(*row, *col),
            Expr::Re { of } => C64::new(of.eval(values, n).re, 0.0),
            Expr::Im { of } => C64::new(of.eval(values, n).im, 0.0),
            Expr::Conj { of } => of.eval(values, n).conj(),
            Expr::Abs2 { of } => C64::new(of.eval(values, n).norm_sqr(), 0.0),
            Expr::Add { terms } => terms.iter().map(|t| t.eval(values, n)).sum(),
            Expr::Mul { factors } => factors.iter().map(|t| t.eval(values, n)).product(),
            Expr::Scale { by, of } => of.eval(values, n) * *by,
        }
    }

    /// Upper bound on `|f|` over `G^{|Gamma|}` for matrices of order `n`:
    /// unitary entries have modulus at most one and traces at most `n`.
    fn bound(&self, n: usize) -> f64 {
        match self {
            Expr::Const { re, im } => C64::new(*re, *im).norm(),
            Expr::Trace { .. } => n as f64,
            Expr::Coeff { .. } => 1.0,
            Expr::Re { of } | Expr::Im { of } | Expr::Conj { of } => of.bound(n),
            Expr::Abs2 { of } => of.bound(n).powi(2),
            Expr::Add { terms } => terms.iter().map(|t| t.bound(n)).sum(),
            Expr::Mul { factors } => factors.iter().map(|t| t.bound(n)).product(),
            Expr::Scale { by, of } => by.abs() * of.bound(n),
        }
    }

    fn max_slot(&self) -> Option<usize> {
        match self {
            Expr::Const { .. } => None,
            Expr::Trace { of } | Expr::Coeff { of, .. } => of.max_slot(),
            Expr::Re { of } | Expr::Im { of } | Expr::Conj { of } | Expr::Abs2 { of } | Expr::Scale { of, .. } => {
                of.max_slot()
            }
            Expr::Add { terms } => terms.iter().filter_map(Expr::max_slot).max(),
            Expr::Mul { factors } => factors.iter().filter_map(Expr::max_slot).max(),
        }
    }

    fn coeff_in_range(&self, n: usize) -> bool {
        match self {
            Expr::Const { .. } | Expr::Trace { .. } => true,
            Expr::Coeff { row, col, .. } => *row < n && *col < n,
            Expr::Re { of } | Expr::Im { of } | Expr::Conj { of } | Expr::Abs2 { of } | Expr::Scale { of, .. } => {
                of.coeff_in_range(n)
            }
            Expr::Add { terms } => terms.iter().all(|t| t.coeff_in_range(n)),
            Expr::Mul { factors } => factors.iter().all(|t| t.coeff_in_range(n)),
        }
    }

    fn substitute(&self, children: &dyn Fn(usize) -> Result<Vec<usize>>) -> Result<Expr> {
        let boxed = |of: &Expr| -> Result<Box<Expr>> { Ok(Box::new(of.substitute(children)?)) };
        Ok(match self {
            Expr::Const { re, im } => Expr::Const { re: *re, im: *im },
            Expr::Trace { of } => Expr::Trace {
                of: of.substitute(children)?,
            },
            Expr::Coeff { of, row, col } => Expr::Coeff {
                of: of.substitute(children)?,
                row: *row,
                col: *col,
            },
            Expr::Re { of } => Expr::Re { of: boxed(of)? },
            Expr::Im { of } => Expr::Im { of: boxed(of)? },
            Expr::Conj { of } => Expr::Conj { of: boxed(of)? },
            Expr::Abs2 { of } => Expr::Abs2 { of: boxed(of)? },
            Expr::Scale { by, of } => Expr::Scale {
                by: *by,
                of: boxed(of)?,
            },
            Expr::Add { terms } => Expr::Add {
                terms: terms.iter().map(|t| t.substitute(children)).collect::<Result<_>>()?,
            },
            Expr::Mul { factors } => Expr::Mul {
                factors: factors.iter().map(|t| t.substitute(children)).collect::<Result<_>>()?,
            },
        })
    }
}

/// A function on `G^{|Gamma_level|}` given by an expression tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderFunction {
    pub group: Group,
    /// 1-based level in the graph system.
    pub level: usize,
    pub edges: usize,
    pub expr: Expr,
}

impl CylinderFunction {
    pub fn new(group: Group, level: usize, edges: usize, expr: Expr) -> Result<Self> {
        if let Some(s) = expr.max_slot() {
            if s >= edges {
                return Err(Error::InvalidArgument(format!(
                    "slot {s} on a level with {edges} edges"
                )));
            }
        }
        if !expr.coeff_in_range(group.matrix_dim()) {
            return Err(Error::InvalidArgument(format!(
                "matrix coefficient out of range for {group}"
            )));
        }
        Ok(CylinderFunction {
            group,
            level,
            edges,
            expr,
        })
    }

    /// A cylinder function at `level` of `system`.
    pub fn on(system: &GraphSystem, group: Group, level: usize, expr: Expr) -> Result<Self> {
        if level == 0 || level > system.levels() {
            return Err(Error::InvalidArgument(format!("no level {level} in the system")));
        }
        Self::new(group, level, system.level(level).edge_count(), expr)
    }

    pub fn eval(&self, values: &[GroupElement]) -> C64 {
        assert_eq!(values.len(), self.edges, "cylinder function evaluated on the wrong level");
        self.expr.eval(values, self.group.matrix_dim())
    }

    /// Certified bound on `sup |f|`.
    pub fn bound(&self) -> f64 {
        self.expr.bound(self.group.matrix_dim())
    }

    pub fn mul(&self, other: &CylinderFunction) -> Result<CylinderFunction> {
        if self.group != other.group || self.level != other.level {
            return Err(Error::InvalidArgument("product of cylinder functions on different levels".into()));
        }
        Self::new(
            self.group,
            self.level,
            self.edges,
            Expr::Mul {
                factors: vec![self.expr.clone(), other.expr.clone()],
            },
        )
    }

    /// Evaluate after the gauge action `H_e -> g(tail) H_e g(head)^-1` at the
    /// vertices of `graph`.
    pub fn eval_gauged(&self, values: &[GroupElement], graph: &Graph, vertex: &[GroupElement]) -> C64 {
        let acted: Vec<GroupElement> = values
            .iter()
            .zip(&graph.edges)
            .map(|(h, e)| vertex[e.tail] * *h * vertex[e.head].inverse())
            .collect();
        self.eval(&acted)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: CylinderFunction = serde_json::from_str(s)?;
        Self::new(f.group, f.level, f.edges, f.expr)
    }
}

/// Substitute every edge slot by the ordered word of its children.
pub fn pullback(f: &CylinderFunction, system: &GraphSystem) -> Result<CylinderFunction> {
    if f.level >= system.levels() {
        return Err(Error::NoRefinement(f.level));
    }
    let children = |e: usize| system.children(f.level, e).map(<[usize]>::to_vec);
    CylinderFunction::new(
        f.group,
        f.level + 1,
        system.level(f.level + 1).edge_count(),
        f.expr.substitute(&children)?,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub mean: C64,
    pub stderr: f64,
    pub samples: usize,
}

/// Samples per independently seeded stream.
const CHUNK: usize = 4096;

/// Monte-Carlo integral against product Haar measure.
///
/// Samples are drawn in fixed-size chunks, chunk `c` from stream `c` of a
/// generator seeded with `seed`, so the result does not depend on the thread
/// count.
pub fn haar_integrate(f: &CylinderFunction, samples: usize, seed: u64) -> Result<Integral> {
    if samples < 2 {
        return Err(Error::InvalidArgument("Haar integration needs at least two samples".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let values: Vec<C64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut buf = Vec::with_capacity(f.edges);
            (0..count)
                .map(|_| {
                    buf.clear();
                    buf.extend((0..f.edges).map(|_| haar_draw(f.group, &mut rng)));
                    f.eval(&buf)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let (mean, stderr) = complex_mean_stderr(&values);
    Ok(Integral {
        mean,
        stderr,
        samples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub coarse: Integral,
    pub fine: Integral,
    pub defect: f64,
    /// Combined standard error of the two estimates.
    pub sigma: f64,
    pub within_3_sigma: bool,
}

/// Compare the integral of `f` with that of its pullback, from independent
/// sample streams.
pub fn consistency_check(
    f: &CylinderFunction,
    system: &GraphSystem,
    samples: usize,
    seed: u64,
) -> Result<ConsistencyReport> {
    let up = pullback(f, system)?;
    let coarse = haar_integrate(f, samples, seed)?;
    let fine = haar_integrate(&up, samples, seed.wrapping_add(0x9e37_79b9_7f4a_7c15))?;
    let defect = (coarse.mean - fine.mean).norm();
    let sigma = coarse.stderr.hypot(fine.stderr);
    Ok(ConsistencyReport {
        coarse,
        fine,
        defect,
        sigma,
        within_3_sigma: defect <= 3.0 * sigma,
    })
}

/// A named plaquette word `e_x(i,j) e_y(i+1,j) e_x(i,j+1)^-1 e_y(i,j)^-1` on a
/// square lattice with `s` sites per side.
pub fn plaquette(s: usize, i: usize, j: usize) -> MatExpr {
    MatExpr::word(vec![
        MatExpr::slot(lattice_edge_index(2, s, 0, i, j)),
        MatExpr::slot(lattice_edge_index(2, s, 1, (i + 1) % s, j)),
        MatExpr::slot(lattice_edge_index(2, s, 0, i, (j + 1) % s)).inv(),
        MatExpr::slot(lattice_edge_index(2, s, 1, i, j)).inv(),
    ])
}

/// The fixed suite of six cylinder functions on level 1 of the square
/// lattice system: a constant, two `U1` and three `SU2` functions.
pub fn consistency_suite(system: &GraphSystem) -> Result<Vec<(String, CylinderFunction)>> {
    let s = 1usize << system.level(1).level;
    let e = |k: usize| MatExpr::slot(k);
    let items = vec![
        ("constant", Group::U1, Expr::constant(2.5)),
        ("u1_character", Group::U1, Expr::trace(e(0)).re()),
        (
            "u1_word_abs2",
            Group::U1,
            Expr::trace(MatExpr::word(vec![e(0), e(1).inv(), e(2)])).re().abs2(),
        ),
        ("su2_character", Group::SU2, Expr::trace(e(0)).re().scale(0.5)),
        ("su2_trace_abs2", Group::SU2, Expr::trace(e(1)).abs2().scale(0.5)),
        ("su2_plaquette", Group::SU2, Expr::trace(plaquette(s, 0, 0)).re().scale(0.5)),
    ];
    items
        .into_iter()
        .map(|(name, g, expr)| Ok((name.to_string(), CylinderFunction::on(system, g, 1, expr)?)))
        .collect()
}

/// Verification step count for the density experiment.
pub const DENSITY_STEPS: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub group: Group,
    pub level: usize,
    pub seed: u64,
    pub distances: Vec<f64>,
    pub iterations: Vec<usize>,
    pub max_distance: f64,
    pub tolerance: f64,
    pub success: bool,
}

/// Draw random targets at `level` and realize each with a smooth connection.
pub fn density_experiment(
    system: &GraphSystem,
    level: usize,
    group: Group,
    trials: usize,
    seed: u64,
    tolerance: f64,
) -> Result<DensityReport> {
    if level == 0 || level > system.levels() {
        return Err(Error::InvalidArgument(format!("no level {level} in the system")));
    }
    let graph = system.level(level);
    let rows = (0..trials)
        .into_par_iter()
        .map(|t| {
            let targets = HolonomyAssignment {
                group,
                values: haar_sample(group, seed.wrapping_add(t as u64), graph.edge_count()),
            };
            let c = surjectivity_construct(graph, &targets, DENSITY_STEPS)?;
            Ok((c.residual, c.iterations))
        })
        .collect::<Result<Vec<_>>>()?;
    let distances: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let max_distance = distances.iter().cloned().fold(0.0, f64::max);
    Ok(DensityReport {
        group,
        level,
        seed,
        iterations: rows.iter().map(|r| r.1).collect(),
        max_distance,
        tolerance,
        success: max_distance <= tolerance,
        distances,
    })
}
