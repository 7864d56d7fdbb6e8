//! Classical observables: functions on `T*T^d`, on the dual algebra and on
//! their product, with the canonical and Lie-Poisson brackets.
//!
//! Phase-space symbols are finite sums `sum_k e^{2 pi i k.x} P_k(p)` where each
//! momentum profile `P_k` is a sum of polynomials times isotropic Gaussians
//! `exp(-beta |p|^2)`. That class is closed under products and derivatives, so
//! brackets are computed exactly on the representation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::group::Group;
use crate::linalg::C64;
use crate::{Error, Result};

/// Largest total polynomial degree a symbol may carry.
pub const MAX_DEGREE: usize = 6;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Polynomial in `p_1, p_2` as `(exponents, coefficient)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Poly(pub Vec<([u8; 2], C64)>);

impl Poly {
    fn from_map(map: BTreeMap<[u8; 2], C64>) -> Self {
        Poly(map.into_iter().filter(|(_, c)| *c != C64::new(0.0, 0.0)).collect())
    }

    fn to_map(&self) -> BTreeMap<[u8; 2], C64> {
        let mut m = BTreeMap::new();
        for (e, c) in &self.0 {
            *m.entry(*e).or_insert(C64::new(0.0, 0.0)) += *c;
        }
        m
    }

    pub fn constant(c: C64) -> Self {
        Self::from_map(BTreeMap::from([([0, 0], c)]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0
            .iter()
            .map(|(e, _)| (e[0] + e[1]) as usize)
            .max()
            .unwrap_or(0)
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut m = self.to_map();
        for (e, c) in &other.0 {
            *m.entry(*e).or_insert(C64::new(0.0, 0.0)) += *c;
        }
        Self::from_map(m)
    }

    fn scale(&self, s: C64) -> Poly {
        Poly(self.0.iter().map(|(e, c)| (*e, c * s)).filter(|(_, c)| *c != C64::new(0.0, 0.0)).collect())
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut m = BTreeMap::new();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                let e = [e1[0] + e2[0], e1[1] + e2[1]];
                *m.entry(e).or_insert(C64::new(0.0, 0.0)) += c1 * c2;
            }
        }
        Self::from_map(m)
    }

    fn deriv(&self, mu: usize) -> Poly {
        let mut m = BTreeMap::new();
        for (e, c) in &self.0 {
            if e[mu] > 0 {
                let mut f = *e;
                f[mu] -= 1;
                *m.entry(f).or_insert(C64::new(0.0, 0.0)) += c * e[mu] as f64;
            }
        }
        Self::from_map(m)
    }

    fn times_p(&self, mu: usize) -> Poly {
        Poly(
            self.0
                .iter()
                .map(|(e, c)| {
                    let mut f = *e;
                    f[mu] += 1;
                    (f, *c)
                })
                .collect(),
        )
    }

    fn conj(&self) -> Poly {
        Poly(self.0.iter().map(|(e, c)| (*e, c.conj())).collect())
    }

    pub fn eval(&self, p: [f64; 2]) -> C64 {
        self.0
            .iter()
            .map(|(e, c)| c * p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32))
            .sum()
    }
}

/// `sum_j poly_j(p) exp(-beta_j |p|^2)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Profile(pub Vec<GaussTerm>);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussTerm {
    pub beta: f64,
    pub poly: Poly,
}

impl Profile {
    fn from_terms(terms: impl IntoIterator<Item = GaussTerm>) -> Self {
        let mut by_beta: Vec<GaussTerm> = Vec::new();
        for t in terms {
            match by_beta.iter_mut().find(|b| b.beta.to_bits() == t.beta.to_bits()) {
                Some(b) => b.poly = b.poly.add(&t.poly),
                None => by_beta.push(t),
            }
        }
        by_beta.retain(|t| !t.poly.is_zero());
        by_beta.sort_by(|a, b| a.beta.total_cmp(&b.beta));
        Profile(by_beta)
    }

    pub fn polynomial(poly: Poly) -> Self {
        Self::from_terms([GaussTerm { beta: 0.0, poly }])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|t| t.poly.degree()).max().unwrap_or(0)
    }

    fn add(&self, other: &Profile) -> Profile {
        Self::from_terms(self.0.iter().chain(&other.0).cloned())
    }

    fn scale(&self, s: C64) -> Profile {
        Self::from_terms(self.0.iter().map(|t| GaussTerm {
            beta: t.beta,
            poly: t.poly.scale(s),
        }))
    }

    fn mul(&self, other: &Profile) -> Profile {
        let mut out = Vec::new();
        for a in &self.0 {
            for b in &other.0 {
                out.push(GaussTerm {
                    beta: a.beta + b.beta,
                    poly: a.poly.mul(&b.poly),
                });
            }
        }
        Self::from_terms(out)
    }

    fn dp(&self, mu: usize) -> Profile {
        Self::from_terms(self.0.iter().map(|t| GaussTerm {
            beta: t.beta,
            poly: t
                .poly
                .deriv(mu)
                .add(&t.poly.times_p(mu).scale(C64::new(-2.0 * t.beta, 0.0))),
        }))
    }

    fn conj(&self) -> Profile {
        Profile(
            self.0
                .iter()
                .map(|t| GaussTerm {
                    beta: t.beta,
                    poly: t.poly.conj(),
                })
                .collect(),
        )
    }

    pub fn eval(&self, p: [f64; 2]) -> C64 {
        let r2 = p[0] * p[0] + p[1] * p[1];
        self.0
            .iter()
            .map(|t| t.poly.eval(p) * (-t.beta * r2).exp())
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeTerm {
    pub k: [i32; 2],
    pub profile: Profile,
}

/// A symbol on `T*T^d`: `sum_k e^{2 pi i k.x} P_k(p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSymbol {
    pub dim: usize,
    pub modes: Vec<ModeTerm>,
}

impl PhaseSymbol {
    fn from_modes(dim: usize, modes: impl IntoIterator<Item = ([i32; 2], Profile)>) -> Self {
        let mut map: BTreeMap<[i32; 2], Profile> = BTreeMap::new();
        for (k, p) in modes {
            let entry = map.entry(k).or_default();
            *entry = entry.add(&p);
        }
        PhaseSymbol {
            dim,
            modes: map
                .into_iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(k, profile)| ModeTerm { k, profile })
                .collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        PhaseSymbol {
            dim,
            modes: Vec::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_modes(dim, [([0, 0], Profile::polynomial(Poly::constant(C64::new(c, 0.0))))])
    }

    /// `c e^{2 pi i k.x}`.
    pub fn x_mode(dim: usize, k: [i32; 2], c: C64) -> Self {
        Self::from_modes(dim, [(mask(dim, k), Profile::polynomial(Poly::constant(c)))])
    }

    /// `cos(2 pi k.x)`.
    pub fn cos_mode(dim: usize, k: [i32; 2]) -> Self {
        let h = C64::new(0.5, 0.0);
        Self::x_mode(dim, k, h).add(&Self::x_mode(dim, [-k[0], -k[1]], h))
    }

    /// `sin(2 pi k.x)`.
    pub fn sin_mode(dim: usize, k: [i32; 2]) -> Self {
        let h = C64::new(0.0, -0.5);
        Self::x_mode(dim, k, h).add(&Self::x_mode(dim, [-k[0], -k[1]], -h))
    }

    /// The momentum coordinate `p_mu`.
    pub fn momentum(dim: usize, mu: usize) -> Self {
        let mut e = [0u8; 2];
        e[mu] = 1;
        Self::from_modes(
            dim,
            [([0, 0], Profile::polynomial(Poly(vec![(e, C64::new(1.0, 0.0))])))],
        )
    }

    /// `exp(-|p|^2 / (2 sigma^2))`.
    pub fn gaussian(dim: usize, sigma: f64) -> Self {
        Self::from_modes(
            dim,
            [(
                [0, 0],
                Profile::from_terms([GaussTerm {
                    beta: 0.5 / (sigma * sigma),
                    poly: Poly::constant(C64::new(1.0, 0.0)),
                }]),
            )],
        )
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.modes.iter().map(|m| m.profile.degree()).max().unwrap_or(0)
    }

    /// Largest `|k|_inf`.
    pub fn band(&self) -> usize {
        self.modes
            .iter()
            .map(|m| m.k[0].unsigned_abs().max(m.k[1].unsigned_abs()) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn has_gaussian(&self) -> bool {
        self.modes.iter().any(|m| m.profile.0.iter().any(|t| t.beta > 0.0))
    }

    pub fn profile(&self, k: [i32; 2]) -> Option<&Profile> {
        self.modes.iter().find(|m| m.k == k).map(|m| &m.profile)
    }

    fn check_dim(&self, other: &PhaseSymbol) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::InvalidArgument(format!(
                "symbols on T*T^{} and T*T^{}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PhaseSymbol) -> PhaseSymbol {
        Self::from_modes(
            self.dim,
            self.modes
                .iter()
                .chain(&other.modes)
                .map(|m| (m.k, m.profile.clone())),
        )
    }

    pub fn scale(&self, s: C64) -> PhaseSymbol {
        Self::from_modes(self.dim, self.modes.iter().map(|m| (m.k, m.profile.scale(s))))
    }

    pub fn mul(&self, other: &PhaseSymbol) -> PhaseSymbol {
        let mut out = Vec::new();
        for a in &self.modes {
            for b in &other.modes {
                out.push(([a.k[0] + b.k[0], a.k[1] + b.k[1]], a.profile.mul(&b.profile)));
            }
        }
        Self::from_modes(self.dim, out)
    }

    pub fn dx(&self, mu: usize) -> PhaseSymbol {
        Self::from_modes(
            self.dim,
            self.modes.iter().map(|m| {
                (m.k, m.profile.scale(C64::new(0.0, TWO_PI * m.k[mu] as f64)))
            }),
        )
    }

    pub fn dp(&self, mu: usize) -> PhaseSymbol {
        Self::from_modes(self.dim, self.modes.iter().map(|m| (m.k, m.profile.dp(mu))))
    }

    /// Pointwise complex conjugate `f*`.
    pub fn conj(&self) -> PhaseSymbol {
        Self::from_modes(
            self.dim,
            self.modes.iter().map(|m| ([-m.k[0], -m.k[1]], m.profile.conj())),
        )
    }

    /// Components beyond `dim` are ignored.
    pub fn eval(&self, x: [f64; 2], mut p: [f64; 2]) -> C64 {
        if self.dim == 1 {
            p[1] = 0.0;
        }
        self.modes
            .iter()
            .map(|m| {
                let phase = TWO_PI * (m.k[0] as f64 * x[0] + m.k[1] as f64 * x[1]);
                C64::from_polar(1.0, phase) * m.profile.eval(p)
            })
            .sum()
    }

    /// `sup |f|` over the `n^d` position grid times the momentum lattice
    /// `{ j dp : |j| dp <= p_max }^d`.
    pub fn sup_norm(&self, n: usize, p_max: f64, dp: f64) -> f64 {
        let m = (p_max / dp).floor() as i64;
        let ps: Vec<f64> = (-m..=m).map(|j| j as f64 * dp).collect();
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let (x2, p2): (&[f64], &[f64]) = if self.dim == 2 { (&xs, &ps) } else { (&[0.0], &[0.0]) };
        let mut best = 0.0f64;
        for &x1 in &xs {
            for &y in x2 {
                for &p1 in &ps {
                    for &q in p2 {
                        best = best.max(self.eval([x1, y], [p1, q]).norm());
                    }
                }
            }
        }
        best
    }

    fn ensure_degree(self) -> Result<PhaseSymbol> {
        let degree = self.degree();
        if degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow {
                degree,
                max: MAX_DEGREE,
            });
        }
        Ok(self)
    }
}

fn mask(dim: usize, mut k: [i32; 2]) -> [i32; 2] {
    if dim == 1 {
        k[1] = 0;
    }
    k
}

/// Canonical bracket `sum_mu (d_p f d_x g - d_x f d_p g)`.
pub fn canonical_bracket(f: &PhaseSymbol, g: &PhaseSymbol) -> Result<PhaseSymbol> {
    f.check_dim(g)?;
    let mut out = PhaseSymbol::zero(f.dim);
    for mu in 0..f.dim {
        let a = f.dp(mu).mul(&g.dx(mu));
        let b = f.dx(mu).mul(&g.dp(mu));
        out = out.add(&a).add(&b.scale(C64::new(-1.0, 0.0)));
    }
    out.ensure_degree()
}

/// Polynomial on the dual algebra in the dual-basis coordinates `mu_a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieSymbol {
    pub group: Group,
    pub terms: Vec<([u8; 3], C64)>,
}

impl LieSymbol {
    fn from_map(group: Group, map: BTreeMap<[u8; 3], C64>) -> Self {
        LieSymbol {
            group,
            terms: map.into_iter().filter(|(_, c)| *c != C64::new(0.0, 0.0)).collect(),
        }
    }

    fn to_map(&self) -> BTreeMap<[u8; 3], C64> {
        let mut m = BTreeMap::new();
        for (e, c) in &self.terms {
            *m.entry(*e).or_insert(C64::new(0.0, 0.0)) += *c;
        }
        m
    }

    pub fn zero(group: Group) -> Self {
        LieSymbol {
            group,
            terms: Vec::new(),
        }
    }

    pub fn constant(group: Group, c: f64) -> Self {
        Self::from_map(group, BTreeMap::from([([0, 0, 0], C64::new(c, 0.0))]))
    }

    /// The linear function `mu -> <mu, sum_a c_a b_a>`.
    pub fn linear(group: Group, coeffs: &[f64]) -> Self {
        let mut m = BTreeMap::new();
        for (a, c) in coeffs.iter().enumerate().take(group.algebra_dim()) {
            let mut e = [0u8; 3];
            e[a] = 1;
            m.insert(e, C64::new(*c, 0.0));
        }
        Self::from_map(group, m)
    }

    pub fn coordinate(group: Group, a: usize) -> Self {
        let mut c = vec![0.0; group.algebra_dim()];
        c[a] = 1.0;
        Self::linear(group, &c)
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| (e[0] + e[1] + e[2]) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LieSymbol) -> LieSymbol {
        let mut m = self.to_map();
        for (e, c) in &other.terms {
            *m.entry(*e).or_insert(C64::new(0.0, 0.0)) += *c;
        }
        Self::from_map(self.group, m)
    }

    pub fn scale(&self, s: C64) -> LieSymbol {
        Self::from_map(self.group, self.terms.iter().map(|(e, c)| (*e, c * s)).collect())
    }

    pub fn mul(&self, other: &LieSymbol) -> LieSymbol {
        let mut m = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                *m.entry(e).or_insert(C64::new(0.0, 0.0)) += c1 * c2;
            }
        }
        Self::from_map(self.group, m)
    }

    pub fn deriv(&self, a: usize) -> LieSymbol {
        let mut m = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[a] > 0 {
                let mut f = *e;
                f[a] -= 1;
                *m.entry(f).or_insert(C64::new(0.0, 0.0)) += c * e[a] as f64;
            }
        }
        Self::from_map(self.group, m)
    }

    /// Constant term and linear coefficients, or `NonlinearSymbol`.
    pub fn affine_parts(&self) -> Result<(C64, Vec<C64>)> {
        let degree = self.degree();
        if degree >= 2 {
            return Err(Error::NonlinearSymbol(degree));
        }
        let mut c0 = C64::new(0.0, 0.0);
        let mut lin = vec![C64::new(0.0, 0.0); self.group.algebra_dim()];
        for (e, c) in &self.terms {
            match e.iter().position(|&x| x == 1) {
                Some(a) => lin[a] += *c,
                None => c0 += *c,
            }
        }
        Ok((c0, lin))
    }

    pub fn eval(&self, mu: &[f64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = *c;
                for (a, &k) in e.iter().enumerate() {
                    if k > 0 {
                        v *= mu[a].powi(k as i32);
                    }
                }
                v
            })
            .sum()
    }
}

/// Lie-Poisson bracket `{f, g}(mu) = sum_{a,b,c} d_a f d_b g C_ab^c mu_c`.
pub fn lie_poisson_bracket(f: &LieSymbol, g: &LieSymbol) -> Result<LieSymbol> {
    if f.group != g.group {
        return Err(Error::GroupMismatch);
    }
    let group = f.group;
    let c = group.structure_constants();
    let ad = group.algebra_dim();
    let mut out = LieSymbol::zero(group);
    for a in 0..ad {
        let fa = f.deriv(a);
        if fa.is_zero() {
            continue;
        }
        for b in 0..ad {
            let gb = g.deriv(b);
            if gb.is_zero() {
                continue;
            }
            let coeffs: Vec<f64> = (0..ad).map(|k| c[a][b][k]).collect();
            if coeffs.iter().all(|v| *v == 0.0) {
                continue;
            }
            out = out.add(&fa.mul(&gb).mul(&LieSymbol::linear(group, &coeffs)));
        }
    }
    let degree = out.degree();
    if degree > MAX_DEGREE {
        return Err(Error::DegreeOverflow {
            degree,
            max: MAX_DEGREE,
        });
    }
    Ok(out)
}

/// A finite sum of separable terms `f_i(x, p) h_i(mu)` on `T*T^d x g*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductSymbol {
    pub terms: Vec<(PhaseSymbol, LieSymbol)>,
}

impl ProductSymbol {
    pub fn separable(f: PhaseSymbol, h: LieSymbol) -> Self {
        ProductSymbol {
            terms: vec![(f, h)],
        }
    }

    pub fn eval(&self, x: [f64; 2], p: [f64; 2], mu: &[f64]) -> C64 {
        self.terms.iter().map(|(f, h)| f.eval(x, p) * h.eval(mu)).sum()
    }
}

/// Sum of the canonical and Lie-Poisson brackets, expanded by Leibniz.
pub fn product_bracket(f: &ProductSymbol, g: &ProductSymbol) -> Result<ProductSymbol> {
    let mut terms = Vec::new();
    for (f1, h1) in &f.terms {
        for (f2, h2) in &g.terms {
            let cb = canonical_bracket(f1, f2)?;
            if !cb.is_zero() {
                terms.push((cb, h1.mul(h2)));
            }
            let lb = lie_poisson_bracket(h1, h2)?;
            if !lb.is_zero() {
                terms.push((f1.mul(f2), lb));
            }
        }
    }
    Ok(ProductSymbol { terms })
}

/// A classical observable on one of the three Poisson manifolds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "base", rename_all = "snake_case")]
pub enum Symbol {
    CotangentTorus(PhaseSymbol),
    DualAlgebra(LieSymbol),
    Product(ProductSymbol),
}

pub fn poisson_bracket(f: &Symbol, g: &Symbol) -> Result<Symbol> {
    match (f, g) {
        (Symbol::CotangentTorus(a), Symbol::CotangentTorus(b)) => {
            Ok(Symbol::CotangentTorus(canonical_bracket(a, b)?))
        }
        (Symbol::DualAlgebra(a), Symbol::DualAlgebra(b)) => {
            Ok(Symbol::DualAlgebra(lie_poisson_bracket(a, b)?))
        }
        (Symbol::Product(a), Symbol::Product(b)) => Ok(Symbol::Product(product_bracket(a, b)?)),
        _ => Err(Error::InvalidArgument(
            "bracket of symbols on different Poisson manifolds".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_points() -> Vec<([f64; 2], [f64; 2])> {
        vec![([0.1, 0.7], [0.3, -1.1]), ([0.55, 0.2], [-2.0, 0.4]), ([0.9, 0.95], [1.3, 1.7])]
    }

    fn generic(dim: usize) -> PhaseSymbol {
        let quad = PhaseSymbol::momentum(dim, 0)
            .mul(&PhaseSymbol::momentum(dim, 0))
            .scale(C64::new(0.3, 0.0))
            .add(&PhaseSymbol::momentum(dim, dim - 1))
            .add(&PhaseSymbol::constant(dim, 1.0));
        PhaseSymbol::cos_mode(dim, [1, 1])
            .add(&PhaseSymbol::sin_mode(dim, [2, 0]).scale(C64::new(0.4, 0.0)))
            .mul(&quad)
            .mul(&PhaseSymbol::gaussian(dim, 1.5))
    }

    #[test]
    fn self_bracket_vanishes() {
        for dim in [1, 2] {
            let f = generic(dim);
            let b = canonical_bracket(&f, &f).unwrap();
            for (x, p) in sample_points() {
                assert!(b.eval(x, p).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn momentum_with_mode() {
        let k = [3, 0];
        let b = canonical_bracket(
            &PhaseSymbol::momentum(1, 0),
            &PhaseSymbol::x_mode(1, k, C64::new(1.0, 0.0)),
        )
        .unwrap();
        for (x, p) in sample_points() {
            let expect = C64::new(0.0, TWO_PI * 3.0) * C64::from_polar(1.0, TWO_PI * 3.0 * x[0]);
            assert!((b.eval(x, p) - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let f = generic(2);
        let h = 1e-6;
        for (x, p) in sample_points() {
            for mu in 0..2 {
                let mut xp = x;
                let mut xm = x;
                xp[mu] += h;
                xm[mu] -= h;
                let fd = (f.eval(xp, p) - f.eval(xm, p)) / (2.0 * h);
                assert!((fd - f.dx(mu).eval(x, p)).norm() < 1e-6);
                let mut pp = p;
                let mut pm = p;
                pp[mu] += h;
                pm[mu] -= h;
                let fd = (f.eval(x, pp) - f.eval(x, pm)) / (2.0 * h);
                assert!((fd - f.dp(mu).eval(x, p)).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn bracket_matches_finite_difference_oracle() {
        let f = generic(1);
        let g = PhaseSymbol::sin_mode(1, [1, 0])
            .mul(&PhaseSymbol::momentum(1, 0))
            .add(&PhaseSymbol::cos_mode(1, [2, 0]));
        let b = canonical_bracket(&f, &g).unwrap();
        let h = 1e-5;
        for (x, p) in sample_points() {
            let d = |s: &PhaseSymbol, dx: f64, dp: f64| {
                (s.eval([x[0] + dx, 0.0], [p[0] + dp, 0.0]) - s.eval([x[0] - dx, 0.0], [p[0] - dp, 0.0])) / (2.0 * h)
            };
            let expect = d(&f, 0.0, h) * d(&g, h, 0.0) - d(&f, h, 0.0) * d(&g, 0.0, h);
            assert!((b.eval(x, p) - expect).norm() < 1e-5 * expect.norm().max(1.0));
        }
    }

    #[test]
    fn degree_overflow() {
        let p = PhaseSymbol::momentum(1, 0);
        let p4 = p.mul(&p).mul(&p).mul(&p);
        let f = p4.mul(&PhaseSymbol::cos_mode(1, [1, 0]));
        let g = p4.mul(&PhaseSymbol::sin_mode(1, [1, 0]));
        assert!(matches!(
            canonical_bracket(&f, &g),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn conjugation_is_pointwise() {
        let f = generic(2).scale(C64::new(0.2, 0.9));
        for (x, p) in sample_points() {
            assert!((f.conj().eval(x, p) - f.eval(x, p).conj()).norm() < 1e-13);
        }
    }

    #[test]
    fn lie_poisson_brackets() {
        let u = LieSymbol::coordinate(Group::U1, 0);
        assert!(lie_poisson_bracket(&u, &u.mul(&u)).unwrap().is_zero());
        let x = LieSymbol::coordinate(Group::SU2, 0);
        let y = LieSymbol::coordinate(Group::SU2, 1);
        let z = LieSymbol::coordinate(Group::SU2, 2);
        // [b_1, b_2] = sqrt(2) b_3
        let b = lie_poisson_bracket(&x, &y).unwrap();
        let expect = z.scale(C64::new(std::f64::consts::SQRT_2, 0.0));
        let mu = [0.3, -0.7, 1.1];
        assert!((b.eval(&mu) - expect.eval(&mu)).norm() < 1e-14);
        // the Casimir commutes with everything
        let cas = x.mul(&x).add(&y.mul(&y)).add(&z.mul(&z));
        assert!(lie_poisson_bracket(&cas, &x).unwrap().eval(&mu).norm() < 1e-14);
        assert!(matches!(
            LieSymbol::coordinate(Group::SU2, 0).mul(&y).affine_parts(),
            Err(Error::NonlinearSymbol(2))
        ));
    }

    #[test]
    fn product_bracket_sums_both_parts() {
        let f = ProductSymbol::separable(PhaseSymbol::momentum(1, 0), LieSymbol::coordinate(Group::SU2, 0));
        let g = ProductSymbol::separable(
            PhaseSymbol::x_mode(1, [1, 0], C64::new(1.0, 0.0)),
            LieSymbol::coordinate(Group::SU2, 1),
        );
        let b = product_bracket(&f, &g).unwrap();
        let (x, p, mu) = ([0.2, 0.0], [0.7, 0.0], [0.3, -0.4, 0.9]);
        let e = C64::from_polar(1.0, TWO_PI * x[0]);
        let expect = C64::new(0.0, TWO_PI) * e * mu[0] * mu[1]
            + p[0] * e * std::f64::consts::SQRT_2 * mu[2];
        assert!((b.eval(x, p, &mu) - expect).norm() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let s = Symbol::CotangentTorus(generic(2));
        let back: Symbol = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
