//! One runner per experiment. Each returns a table for `results.csv`, the
//! checked invariants and, for sweeps, a plot.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{Experiment, ExperimentConfig};
use super::plot::{Plot, Series};
use crate::field::LieField;
use crate::gauge::GaugeField;
use crate::graph::lattice_system;
use crate::grid::Grid;
use crate::group::{AlgebraElement, Group};
use crate::groupoid::{axiom_check, Variant};
use crate::holonomy::{holonomy, SmoothConnection};
use crate::linalg::C64;
use crate::op_rep::{gauge_conjugate, trace, Kernel};
use crate::projlim::{consistency_check, consistency_suite, density_experiment};
use crate::qconn::{
    compatibility_check, derivative_check, gauge_act_hbar, glue_check, q_product, random_samples, QConnection,
    FD_STEPS,
};
use crate::sdq::smear::{embed_qconnection, equivariance_defect};
use crate::sdq::{dirac_defect, exact_pair, generic_pair, norm_continuity, norm_suite, Symbol};
use crate::stats::loglog_slope;
use crate::torus::{Curve, TorusPoint};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One named invariant with its measured value and tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub invariant: String,
    pub value: f64,
    pub tolerance: f64,
    pub comparator: Comparator,
    pub pass: bool,
}

impl Check {
    pub fn at_most(invariant: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            invariant: invariant.into(),
            value,
            tolerance,
            comparator: Comparator::AtMost,
            pass: value <= tolerance,
        }
    }

    pub fn at_least(invariant: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            invariant: invariant.into(),
            value,
            tolerance,
            comparator: Comparator::AtLeast,
            pass: value >= tolerance,
        }
    }

    /// A convergence-order check that also passes when every defect is at
    /// round-off, where no slope can be fitted.
    fn order_or_roundoff(invariant: &str, slope: Option<f64>, max: f64, order: f64) -> Self {
        if max <= ROUNDOFF {
            Check::at_most(format!("{invariant}.roundoff"), max, ROUNDOFF)
        } else {
            Check::at_least(format!("{invariant}.slope"), slope.unwrap_or(f64::NAN), order)
        }
    }
}

const ROUNDOFF: f64 = 1e-12;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Shortest round-trip float formatting in scientific notation.
fn num(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub experiment: Experiment,
    pub table: Table,
    pub checks: Vec<Check>,
    pub plot: Option<Plot>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Run the experiment named in `config`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Outcome> {
    let (table, checks, plot) = match config.experiment {
        Experiment::Axioms => axioms(config)?,
        Experiment::HolonomyRefine => holonomy_refine(config)?,
        Experiment::GaugeCheck => gauge_check(config)?,
        Experiment::GlueCheck => glue(config)?,
        Experiment::ProductCheck => product(config)?,
        Experiment::MeasureConsistency => measure(config)?,
        Experiment::Density => density(config)?,
        Experiment::DiracSweep => dirac(config)?,
        Experiment::NormContinuity => norms(config)?,
        Experiment::EmbedSmear => smear(config)?,
    };
    Ok(Outcome {
        experiment: config.experiment,
        table,
        checks,
        plot,
    })
}

type Parts = (Table, Vec<Check>, Option<Plot>);

fn rng(config: &ExperimentConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed)
}

fn default_grid(config: &ExperimentConfig, d1: usize, d2: usize) -> Result<Grid> {
    let d = config.dimension();
    Grid::new(config.grid.unwrap_or(if d == 1 { d1 } else { d2 }), d)
}

fn axioms(config: &ExperimentConfig) -> Result<Parts> {
    let mut table = Table::new(&["variant", "tuples", "associativity", "identity", "inverse"]);
    let mut checks = Vec::new();
    for (i, v) in Variant::ALL.into_iter().enumerate() {
        let r = axiom_check(v, config.group(), config.dimension(), config.samples(), config.seed.wrapping_add(i as u64))?;
        table.push(vec![
            v.name().into(),
            r.tuples.to_string(),
            num(r.associativity),
            num(r.identity),
            num(r.inverse),
        ]);
        checks.push(Check::at_most(format!("groupoid.{}.axioms", v.name()), r.max_defect(), 1e-12));
    }
    Ok((table, checks, None))
}

/// Steps of the midpoint-rule sweep and of the reference holonomy.
const REFINE_STEPS: [usize; 5] = [8, 16, 32, 64, 128];
const REFERENCE_STEPS: usize = 8192;

fn holonomy_refine(config: &ExperimentConfig) -> Result<Parts> {
    let mut r = rng(config);
    let d = config.dimension();
    let a = SmoothConnection::random(config.group(), d, config.band(), config.amplitude(), &mut r);
    let curves: Vec<Curve> = (0..config.samples())
        .map(|_| {
            let x: Vec<f64> = (0..d).map(|_| r.random_range(0.0..1.0)).collect();
            let v: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
            Curve::geodesic(TorusPoint::new(&x), &v)
        })
        .collect();
    let refs: Vec<_> = curves.iter().map(|c| holonomy(&a, c, REFERENCE_STEPS)).collect();
    let mut table = Table::new(&["steps", "defect"]);
    let mut defects = Vec::new();
    for steps in REFINE_STEPS {
        let e = curves
            .iter()
            .zip(&refs)
            .map(|(c, h)| holonomy(&a, c, steps).matrix().distance(h.matrix()))
            .fold(0.0, f64::max);
        table.push(vec![steps.to_string(), num(e)]);
        defects.push(e);
    }
    let hs: Vec<f64> = REFINE_STEPS.iter().map(|s| 1.0 / *s as f64).collect();
    let max = defects.iter().cloned().fold(0.0, f64::max);
    let mut checks = vec![Check::order_or_roundoff(
        "holonomy.midpoint_order",
        loglog_slope(&hs, &defects),
        max,
        1.9,
    )];
    let sys = lattice_system(d, 2)?;
    let (coarse, fine) = (sys.level(1), sys.level(2));
    let composition = sys.refinement[0]
        .iter()
        .enumerate()
        .map(|(e, kids)| {
            let parent = holonomy(&a, &coarse.edges[e].curve, 1024);
            let product = holonomy(&a, &fine.edges[kids[0]].curve, 512) * holonomy(&a, &fine.edges[kids[1]].curve, 512);
            parent.matrix().distance(product.matrix())
        })
        .fold(0.0, f64::max);
    checks.push(Check::at_most("holonomy.refinement_composition", composition, 1e-8));
    let plot = Plot {
        title: "midpoint-rule holonomy error".into(),
        x_label: "1 / steps".into(),
        y_label: "max Frobenius defect".into(),
        series: vec![Series {
            label: format!("{} band {}", config.group(), config.band()),
            xs: hs,
            ys: defects,
        }],
    };
    Ok((table, checks, Some(plot)))
}

fn gauge_check(config: &ExperimentConfig) -> Result<Parts> {
    let mut r = rng(config);
    let d = config.dimension();
    let group = config.group();
    let samples = random_samples(d, config.samples(), &mut r);
    let report = match group {
        Group::U1 => {
            // g = exp(i a sin 2 pi x_1) against a constant connection, where the
            // classical action has a closed form
            let y = LieField::from_modes(
                Group::U1,
                d,
                vec![([1, 0], vec![C64::new(0.0, -0.5 * config.amplitude())])],
            )?;
            let a = SmoothConnection::constant(&vec![AlgebraElement::from_coords(Group::U1, &[0.8]); d])?;
            compatibility_check(&GaugeField::exp_of(y), &QConnection::exact(a), &samples, &FD_STEPS)?
        }
        Group::SU2 => {
            let q = QConnection::exact(SmoothConnection::random(group, d, config.band(), config.amplitude(), &mut r));
            let g = GaugeField::random(group, d, config.band(), config.amplitude(), &mut r);
            compatibility_check(&g, &q, &samples, &FD_STEPS)?
        }
    };
    let mut table = Table::new(&["quantity", "param", "value"]);
    for (h, e) in report.central.params.iter().zip(&report.central.defects) {
        table.push(vec!["central_defect".into(), num(*h), num(*e)]);
    }
    table.push(vec!["richardson_defect".into(), String::new(), num(report.richardson)]);
    let mut checks = vec![match group {
        Group::U1 => Check::at_most("qconn.gauge_compatibility.richardson", report.richardson, 1e-6),
        Group::SU2 => Check::order_or_roundoff(
            "qconn.gauge_compatibility.central",
            report.central.slope,
            report.central.max,
            1.9,
        ),
    }];
    let grid = default_grid(config, 16, 8)?;
    let fibre = group.matrix_dim();
    let mut worst: f64 = 0.0;
    for i in 0..config.samples() {
        let k = Kernel::random(grid, fibre, &mut r);
        let g = GaugeField::random(group, d, 2, 1.0, &mut r);
        let e = (trace(&gauge_conjugate(&k, &g)?) - trace(&k)).norm();
        table.push(vec!["trace_defect".into(), i.to_string(), num(e)]);
        worst = worst.max(e);
    }
    checks.push(Check::at_most("op_rep.trace_gauge_invariance", worst, 1e-12));
    let plot = Plot {
        title: "gauge compatibility: central-difference defect".into(),
        x_label: "step".into(),
        y_label: "max defect".into(),
        series: vec![Series {
            label: group.to_string(),
            xs: report.central.params.clone(),
            ys: report.central.defects.clone(),
        }],
    };
    Ok((table, checks, Some(plot)))
}

fn glue(config: &ExperimentConfig) -> Result<Parts> {
    let mut r = rng(config);
    let d = config.dimension();
    let a = SmoothConnection::random(config.group(), d, config.band(), config.amplitude(), &mut r);
    let samples = random_samples(d, config.samples(), &mut r);
    let hbars = config.hbars();
    let rep = glue_check(&QConnection::exact(a), &samples, &hbars)?;
    let mut table = Table::new(&["hbar", "gluing", "diagonal", "reversal"]);
    for i in 0..hbars.len() {
        table.push(vec![
            num(hbars[i]),
            num(rep.gluing.defects[i]),
            num(rep.diagonal.defects[i]),
            num(rep.reversal.defects[i]),
        ]);
    }
    let checks = vec![
        Check::order_or_roundoff("qconn.gluing", rep.gluing.slope, rep.gluing.max, 1.9),
        Check::at_most("qconn.diagonal", rep.diagonal.max, 1e-12),
        Check::at_most("qconn.reversal", rep.reversal.max, 1e-10),
    ];
    let plot = Plot {
        title: "gluing defect".into(),
        x_label: "hbar".into(),
        y_label: "max defect".into(),
        series: vec![
            Series {
                label: "gluing".into(),
                xs: hbars.clone(),
                ys: rep.gluing.defects.clone(),
            },
            Series {
                label: "reversal".into(),
                xs: hbars,
                ys: rep.reversal.defects.clone(),
            },
        ],
    };
    Ok((table, checks, Some(plot)))
}

fn product(config: &ExperimentConfig) -> Result<Parts> {
    let mut r = rng(config);
    let d = config.dimension();
    let (g, band, amp) = (config.group(), config.band(), config.amplitude());
    let a = QConnection::exact(SmoothConnection::random(g, d, band, amp, &mut r));
    let b = QConnection::exact(SmoothConnection::random(g, d, band.saturating_sub(1), amp, &mut r));
    let samples = random_samples(d, config.samples(), &mut r);
    let rep = derivative_check(&q_product(&a, &b)?, &samples, &FD_STEPS)?;
    let mut table = Table::new(&["step", "central_defect"]);
    for (h, e) in rep.central.params.iter().zip(&rep.central.defects) {
        table.push(vec![num(*h), num(*e)]);
    }
    let checks = vec![Check::at_most("qconn.product_derivative.richardson", rep.richardson, 1e-6)];
    let plot = Plot {
        title: "product family: central-difference defect".into(),
        x_label: "step".into(),
        y_label: "max defect".into(),
        series: vec![Series {
            label: "central".into(),
            xs: rep.central.params.clone(),
            ys: rep.central.defects.clone(),
        }],
    };
    Ok((table, checks, Some(plot)))
}

fn measure(config: &ExperimentConfig) -> Result<Parts> {
    let sys = lattice_system(2, 2)?;
    let mut table = Table::new(&["function", "coarse_re", "coarse_im", "fine_re", "fine_im", "defect", "sigma"]);
    let mut checks = Vec::new();
    for (i, (name, f)) in consistency_suite(&sys)?.into_iter().enumerate() {
        let rep = consistency_check(&f, &sys, config.samples(), config.seed.wrapping_add(1000 * i as u64))?;
        table.push(vec![
            name.clone(),
            num(rep.coarse.mean.re),
            num(rep.coarse.mean.im),
            num(rep.fine.mean.re),
            num(rep.fine.mean.im),
            num(rep.defect),
            num(rep.sigma),
        ]);
        checks.push(Check::at_most(format!("projlim.consistency.{name}"), rep.defect, 3.0 * rep.sigma));
    }
    Ok((table, checks, None))
}

/// Edgewise tolerance for the realized holonomies.
pub fn density_tolerance(group: Group) -> f64 {
    match group {
        Group::U1 => 1e-6,
        Group::SU2 => 1e-4,
    }
}

fn density(config: &ExperimentConfig) -> Result<Parts> {
    let level = config.level.unwrap_or(2);
    let sys = lattice_system(config.dimension(), level)?;
    let group = config.group();
    let rep = density_experiment(&sys, level, group, config.samples(), config.seed, density_tolerance(group))?;
    let mut table = Table::new(&["trial", "distance", "iterations"]);
    for (t, (e, it)) in rep.distances.iter().zip(&rep.iterations).enumerate() {
        table.push(vec![t.to_string(), num(*e), it.to_string()]);
    }
    let checks = vec![Check::at_most("surjectivity.density", rep.max_distance, rep.tolerance)];
    Ok((table, checks, None))
}

fn dirac(config: &ExperimentConfig) -> Result<Parts> {
    let d = config.dimension();
    let grid = Grid::new(config.grid.unwrap_or(256), d)?;
    let hbars = config.hbars();
    let (ef, eg) = exact_pair(d);
    let (gf, gg) = generic_pair(d);
    let exact = dirac_defect(&Symbol::CotangentTorus(ef), &Symbol::CotangentTorus(eg), &hbars, grid)?;
    let generic = dirac_defect(&Symbol::CotangentTorus(gf), &Symbol::CotangentTorus(gg), &hbars, grid)?;
    let mut table = Table::new(&["pair", "hbar", "defect", "interior_defect", "adjoint_defect"]);
    for (name, rep) in [("exact", &exact), ("generic", &generic)] {
        for i in 0..hbars.len() {
            table.push(vec![
                name.into(),
                num(hbars[i]),
                num(rep.defects[i]),
                num(rep.interior_defects[i]),
                num(rep.adjoint_defects[i]),
            ]);
        }
    }
    let checks = vec![
        Check::at_most("sdq.dirac.exact_pair", exact.max_defect(), 1e-8),
        Check::at_least("sdq.dirac.generic_slope", generic.fitted_slope.unwrap_or(f64::NAN), 0.9),
        Check::at_most(
            "sdq.weyl_adjoint",
            exact.max_adjoint_defect().max(generic.max_adjoint_defect()),
            1e-10,
        ),
    ];
    let plot = Plot {
        title: "Dirac-condition defect".into(),
        x_label: "hbar".into(),
        y_label: "operator-norm defect".into(),
        series: vec![
            Series {
                label: "generic pair".into(),
                xs: hbars.clone(),
                ys: generic.defects.clone(),
            },
            Series {
                label: "exact pair".into(),
                xs: hbars,
                ys: exact.defects.clone(),
            },
        ],
    };
    Ok((table, checks, Some(plot)))
}

fn norms(config: &ExperimentConfig) -> Result<Parts> {
    let d = config.dimension();
    let grid = Grid::new(config.grid.unwrap_or(256), d)?;
    let hbars = config.hbars();
    let mut table = Table::new(&["symbol", "hbar", "norm", "sup_norm", "defect"]);
    let mut checks = Vec::new();
    let mut series = Vec::new();
    for (i, f) in norm_suite(d).iter().enumerate() {
        let rep = norm_continuity(f, &hbars, grid)?;
        for j in 0..hbars.len() {
            table.push(vec![
                i.to_string(),
                num(hbars[j]),
                num(rep.norms[j]),
                num(rep.sup_norm),
                num(rep.defects[j]),
            ]);
        }
        checks.push(Check::at_most(format!("sdq.norm_continuity.symbol{i}"), rep.final_defect(), 0.05));
        series.push(Series {
            label: format!("symbol {i}"),
            xs: hbars.clone(),
            ys: rep.defects.clone(),
        });
    }
    let plot = Plot {
        title: "| ||Q f|| - ||f||_inf |".into(),
        x_label: "hbar".into(),
        y_label: "norm defect".into(),
        series,
    };
    Ok((table, checks, Some(plot)))
}

fn smear(config: &ExperimentConfig) -> Result<Parts> {
    let mut r = rng(config);
    let d = config.dimension();
    let grid = Grid::new(config.grid.unwrap_or(8), d)?;
    let group_n = config.group_grid.unwrap_or(128);
    let width = config.width.unwrap_or(0.25);
    let q = QConnection::exact(SmoothConnection::random(Group::U1, d, config.band(), config.amplitude(), &mut r));
    let g = GaugeField::random(Group::U1, d, config.band().max(1), config.amplitude(), &mut r);
    let qg = gauge_act_hbar(&g, &q)?;
    let mut table = Table::new(&["hbar", "normalization_defect", "min_concentration", "equivariance_defect"]);
    let (mut norm, mut conc, mut equi) = (0.0f64, f64::INFINITY, 0.0f64);
    for h in config.hbars() {
        let f = embed_qconnection(&q, h, grid, group_n, width)?;
        let fg = embed_qconnection(&qg, h, grid, group_n, width)?;
        let (a, b, c) = (
            f.normalization_defect(),
            f.min_concentration(),
            equivariance_defect(&f, &fg, &g)?,
        );
        table.push(vec![num(h), num(a), num(b), num(c)]);
        norm = norm.max(a);
        conc = conc.min(b);
        equi = equi.max(c);
    }
    let checks = vec![
        Check::at_most("smear.normalization", norm, 1e-10),
        Check::at_least("smear.concentration", conc, 0.99),
        Check::at_most("smear.gauge_equivariance", equi, 1e-8),
    ];
    Ok((table, checks, None))
}
