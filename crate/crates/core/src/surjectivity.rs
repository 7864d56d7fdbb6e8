//! A right inverse of `hol_graph` on dyadic lattices.
//!
//! Each edge `e` along axis `mu` carries a bump 1-form `X_e rho_e(x_mu) psi_e(x_nu) dx_mu`.
//! `rho_e` is a normalized `cos^{2m}` profile peaked at the edge midpoint and
//! `psi_e` is the Dirichlet interpolation kernel of the lattice row, so it is
//! exactly one on the edge's own row and zero on the others. Leakage of the
//! bumps into neighbouring edges of the same row is absorbed by the fixed-point
//! update `X_e <- log(T_e F_e^-1 exp(X_e))`, where `F_e` is the holonomy the
//! current connection actually produces with the verification step count.
//! For `U1` the correction is added in the algebra instead, so that edge
//! phases close to `pi` are not wrapped onto the other branch.

use rayon::prelude::*;

use crate::field::LieField;
use crate::graph::{lattice_edge_coords, Graph};
use crate::group::{exp_map, log_map, AlgebraElement, Group};
use crate::holonomy::{hol_graph, HolonomyAssignment, SmoothConnection};
use crate::linalg::C64;
use crate::torus::{Curve, POINT_TOL};
use crate::{Error, Result};

/// Largest number of correction sweeps.
pub const MAX_ITERATIONS: usize = 20;

#[derive(Clone, Debug)]
pub struct Construction {
    pub connection: SmoothConnection,
    /// Max edgewise Frobenius distance between achieved holonomies and targets.
    pub residual: f64,
    pub iterations: usize,
}

/// Sites per side of a lattice graph, or `UnsupportedGraph` if `gamma` is not
/// an axis-aligned dyadic lattice in the standard edge order.
fn lattice_side(gamma: &Graph) -> Result<usize> {
    let d = gamma.dim();
    let s = 1usize << gamma.level;
    let expected = if d == 1 { s } else { 2 * s * s };
    if gamma.edge_count() != expected {
        return Err(Error::UnsupportedGraph(format!(
            "{} edges where a level-{} lattice has {expected}",
            gamma.edge_count(),
            gamma.level
        )));
    }
    let h = 1.0 / s as f64;
    for (e, edge) in gamma.edges.iter().enumerate() {
        let (axis, i, j) = lattice_edge_coords(d, s, e);
        let mut start = [i as f64 * h, j as f64 * h];
        let mut disp = [0.0; 2];
        disp[axis] = h;
        if d == 1 {
            start[1] = 0.0;
        }
        let ok = match &edge.curve {
            Curve::Geodesic {
                start: p,
                displacement,
            } => {
                p.approx_eq(&crate::torus::TorusPoint::new(&start[..d]), POINT_TOL)
                    && displacement
                        .iter()
                        .zip(&disp)
                        .all(|(a, b)| (a - b).abs() < POINT_TOL)
            }
            Curve::Sampled { .. } => false,
        };
        if !ok {
            return Err(Error::UnsupportedGraph(format!(
                "edge {e} is not the lattice segment it should be"
            )));
        }
    }
    Ok(s)
}

/// Half-power `m` of the `cos^{2m}` bump for `s` cells per side.
fn bump_power(s: usize) -> usize {
    (2 * s * s).max(4)
}

/// Fourier coefficients of `cos^{2m}(pi (t - c)) / int cos^{2m}`, modes `-m..=m`.
fn bump_coeffs(m: usize, centre: f64) -> Vec<(i32, C64)> {
    // C(2m, m + k) / C(2m, m), built by the ratio recursion
    let mut ratio = vec![1.0f64; m + 1];
    for k in 1..=m {
        ratio[k] = ratio[k - 1] * (m + 1 - k) as f64 / (m + k) as f64;
    }
    (-(m as i32)..=m as i32)
        .map(|k| {
            let r = ratio[k.unsigned_abs() as usize];
            let phase = -2.0 * std::f64::consts::PI * k as f64 * centre;
            (k, C64::from_polar(r, phase))
        })
        .collect()
}

/// Coefficients of the Dirichlet kernel that is one at `row / s` and zero at
/// the other lattice rows.
fn row_coeffs(s: usize, row: usize) -> Vec<(i32, C64)> {
    let half = (s / 2) as i32;
    let y0 = row as f64 / s as f64;
    (-half..=half)
        .map(|k| {
            let w = if k.abs() == half && s % 2 == 0 { 0.5 } else { 1.0 };
            let phase = -2.0 * std::f64::consts::PI * k as f64 * y0;
            (k, C64::from_polar(w / s as f64, phase))
        })
        .collect()
}

/// The connection whose edge bumps carry the algebra elements `x`.
fn assemble(gamma: &Graph, s: usize, x: &[AlgebraElement]) -> Result<SmoothConnection> {
    let d = gamma.dim();
    let group = x[0].group();
    let m = bump_power(s);
    let h = 1.0 / s as f64;
    let mut per_axis: Vec<Vec<([i32; 2], Vec<C64>)>> = vec![Vec::new(); d];
    for (e, xe) in x.iter().enumerate() {
        let coords = xe.coords();
        if coords.iter().all(|c| *c == 0.0) {
            continue;
        }
        let (axis, i, j) = lattice_edge_coords(d, s, e);
        let (along, across) = if axis == 0 { (i, j) } else { (j, i) };
        let rho = bump_coeffs(m, (along as f64 + 0.5) * h);
        let psi = if d == 2 {
            row_coeffs(s, across)
        } else {
            vec![(0, C64::new(1.0, 0.0))]
        };
        for &(ka, ca) in &rho {
            for &(kb, cb) in &psi {
                let k = if axis == 0 { [ka, kb] } else { [kb, ka] };
                let c = ca * cb;
                per_axis[axis].push((k, coords.iter().map(|v| c * *v).collect()));
            }
        }
    }
    let components = per_axis
        .into_iter()
        .map(|entries| LieField::from_modes(group, d, merge(entries)))
        .collect::<Result<Vec<_>>>()?;
    SmoothConnection::new(components)
}

fn merge(entries: Vec<([i32; 2], Vec<C64>)>) -> Vec<([i32; 2], Vec<C64>)> {
    let mut table: std::collections::BTreeMap<[i32; 2], Vec<C64>> = Default::default();
    for (k, c) in entries {
        let slot = table.entry(k).or_insert_with(|| vec![C64::new(0.0, 0.0); c.len()]);
        for (s, v) in slot.iter_mut().zip(c) {
            *s += v;
        }
    }
    table.into_iter().collect()
}

/// Build a connection whose holonomies (at `steps` midpoint steps) match
/// `targets` edge by edge.
pub fn surjectivity_construct(
    gamma: &Graph,
    targets: &HolonomyAssignment,
    steps: usize,
) -> Result<Construction> {
    let s = lattice_side(gamma)?;
    if targets.len() != gamma.edge_count() {
        return Err(Error::InvalidArgument(format!(
            "{} targets for {} edges",
            targets.len(),
            gamma.edge_count()
        )));
    }
    let mut x = targets
        .values
        .par_iter()
        .map(log_map)
        .collect::<Result<Vec<_>>>()?;
    let mut iterations = 0;
    loop {
        let connection = assemble(gamma, s, &x)?;
        let achieved = hol_graph(&connection, gamma, steps);
        let residual = achieved.max_distance(targets);
        if residual < 1e-13 || iterations == MAX_ITERATIONS {
            return Ok(Construction {
                connection,
                residual,
                iterations,
            });
        }
        x = x
            .par_iter()
            .zip(&achieved.values)
            .zip(&targets.values)
            .map(|((xe, f), t)| {
                let c = log_map(&(*t * f.inverse()))?;
                // abelian: add in the algebra so phases near pi do not wrap
                match c.group() {
                    Group::U1 => Ok(xe.add(&c)),
                    Group::SU2 => log_map(&(exp_map(&c) * exp_map(xe))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        iterations += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{lattice_system, triangulation_system};
    use crate::group::{haar_sample, Group, GroupElement};

    #[test]
    fn dirichlet_row_kernel_is_a_delta_on_rows() {
        for s in [2, 4, 8] {
            for row in 0..s {
                let c = row_coeffs(s, row);
                for r in 0..s {
                    let y = r as f64 / s as f64;
                    let v: C64 = c
                        .iter()
                        .map(|(k, z)| z * C64::from_polar(1.0, 2.0 * std::f64::consts::PI * *k as f64 * y))
                        .sum();
                    let expect = if r == row { 1.0 } else { 0.0 };
                    assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn identity_targets_give_identities() {
        let g = lattice_system(2, 2).unwrap().level(2).clone();
        let t = HolonomyAssignment::identity(Group::SU2, g.edge_count());
        let c = surjectivity_construct(&g, &t, 256).unwrap();
        assert!(c.residual <= 1e-8);
    }

    #[test]
    fn u1_targets_on_circle() {
        let g = lattice_system(1, 1).unwrap().level(1).clone();
        let (a, b) = (1.1, -2.3);
        let t = HolonomyAssignment {
            group: Group::U1,
            values: vec![GroupElement::u1(a), GroupElement::u1(b)],
        };
        let c = surjectivity_construct(&g, &t, 512).unwrap();
        // abelian oracle: phase of each edge is the exact line integral
        for (e, phase) in [a, b].into_iter().enumerate() {
            let start = e as f64 * 0.5;
            let integral = c.connection.segment_integral([start, 0.0], [0.5, 0.0]);
            let got = integral.matrix().get(0, 0).im;
            assert!((got - phase).abs() < 1e-6, "edge {e}: {got} vs {phase}");
        }
    }

    #[test]
    fn su2_random_targets_on_square_lattice() {
        let g = lattice_system(2, 2).unwrap().level(2).clone();
        let t = HolonomyAssignment {
            group: Group::SU2,
            values: haar_sample(Group::SU2, 17, g.edge_count()),
        };
        let c = surjectivity_construct(&g, &t, 1024).unwrap();
        let check = hol_graph(&c.connection, &g, 1024).max_distance(&t);
        assert!(check <= 1e-4, "residual {check}");
    }

    #[test]
    fn u1_phases_near_pi_converge() {
        let g = lattice_system(1, 2).unwrap().level(2).clone();
        let t = HolonomyAssignment {
            group: Group::U1,
            values: [3.14, -3.13, 3.1, 0.2].map(GroupElement::u1).to_vec(),
        };
        let c = surjectivity_construct(&g, &t, 1024).unwrap();
        assert!(c.residual <= 1e-12, "residual {}", c.residual);
    }

    #[test]
    fn triangulations_are_rejected() {
        let g = triangulation_system(1).unwrap().level(1).clone();
        let t = HolonomyAssignment::identity(Group::U1, g.edge_count());
        assert!(matches!(
            surjectivity_construct(&g, &t, 16),
            Err(Error::UnsupportedGraph(_))
        ));
    }
}
