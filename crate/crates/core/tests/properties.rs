//! Property tests across the public API.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangent_lab::graph::lattice_system;
use tangent_lab::grid::Grid;
use tangent_lab::group::{exp_map, haar_draw, log_map, AlgebraElement, Group};
use tangent_lab::groupoid::{compose, GroupoidElement};
use tangent_lab::holonomy::{holonomy, SmoothConnection};
use tangent_lab::linalg::C64;
use tangent_lab::op_rep::{apply, convolve, involution, trace, GridFunction, Kernel};
use tangent_lab::projlim::{haar_integrate, CylinderFunction, Expr, MatExpr};
use tangent_lab::sdq::{admissible_m, canonical_bracket, PhaseSymbol};
use tangent_lab::torus::{Curve, TorusPoint};
use tangent_lab::xcli::config::{check, parse_value};

fn group() -> impl Strategy<Value = Group> {
    prop_oneof![Just(Group::U1), Just(Group::SU2)]
}

fn algebra(g: Group) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec(-1.0f64..1.0, g.algebra_dim()).prop_map(move |c| AlgebraElement::from_coords(g, &c))
}

fn point(d: usize) -> impl Strategy<Value = TorusPoint> {
    prop::collection::vec(0.0f64..1.0, d).prop_map(|c| TorusPoint::new(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_inverts_exp((g, x) in group().prop_flat_map(|g| (Just(g), algebra(g)))) {
        let back = log_map(&exp_map(&x)).unwrap();
        let err: f64 = back.coords().iter().zip(x.coords()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12, "{g:?} {err}");
    }

    #[test]
    fn haar_elements_have_inverses(g in group(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = haar_draw(g, &mut rng);
        let id = g.identity();
        prop_assert!((h * h.inverse()).distance(&id) < 1e-13);
        prop_assert!((h.inverse() * h).distance(&id) < 1e-13);
    }

    #[test]
    fn pair_groupoid_composes_endpoints(x in point(2), y in point(2), z in point(2)) {
        let a = GroupoidElement::Pair { x, y };
        let b = GroupoidElement::Pair { x: y, y: z };
        let c = compose(&a, &b).unwrap();
        prop_assert_eq!(c.source(), a.source());
        prop_assert_eq!(c.range(), b.range());
        prop_assert!(compose(&b, &a).is_err() || z.approx_eq(&x, 1e-12));
    }

    #[test]
    fn reversed_curve_inverts_holonomy(seed in any::<u64>(), x in point(2), v in prop::collection::vec(-1.0f64..1.0, 2)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = SmoothConnection::random(Group::SU2, 2, 1, 1.0, &mut rng);
        let c = Curve::geodesic(x, &v);
        let h = holonomy(&a, &c, 64) * holonomy(&a, &c.reversed(), 64);
        prop_assert!(h.distance(&Group::SU2.identity()) < 1e-12);
    }

    #[test]
    fn constant_u1_holonomy_is_exact(alpha in -3.0f64..3.0, x in point(1), len in -1.0f64..1.0, steps in 1usize..50) {
        let a = SmoothConnection::constant(&[AlgebraElement::from_coords(Group::U1, &[alpha])]).unwrap();
        let h = holonomy(&a, &Curve::geodesic(x, &[len]), steps);
        let expect = exp_map(&AlgebraElement::from_coords(Group::U1, &[alpha * len]));
        prop_assert!(h.distance(&expect) < 1e-12);
    }

    #[test]
    fn kernel_algebra_laws(seed in any::<u64>(), fibre in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = Grid::new(6, 1).unwrap();
        let a = Kernel::random(grid, fibre, &mut rng);
        let b = Kernel::random(grid, fibre, &mut rng);
        prop_assert!(involution(&involution(&a)).distance(&a) == 0.0);
        let (ab, ba) = (trace(&convolve(&a, &b).unwrap()), trace(&convolve(&b, &a).unwrap()));
        prop_assert!((ab - ba).norm() <= 1e-10 * ab.norm().max(1.0));
        let phi = GridFunction::random(grid, fibre, &mut rng);
        let seq = apply(&b, &apply(&a, &phi).unwrap()).unwrap();
        let once = apply(&convolve(&a, &b).unwrap(), &phi).unwrap();
        let diff: f64 = (0..grid.len())
            .flat_map(|x| (0..fibre).map(move |i| (x, i)))
            .map(|(x, i)| (seq.at(x, i) - once.at(x, i)).norm())
            .fold(0.0, f64::max);
        prop_assert!(diff <= 1e-10 * seq.norm().max(1.0));
    }

    #[test]
    fn canonical_bracket_is_antisymmetric(
        c in prop::collection::vec(-1.0f64..1.0, 4),
        x in 0.0f64..1.0,
        p in -2.0f64..2.0,
    ) {
        let f = PhaseSymbol::cos_mode(1, [1, 0])
            .scale(C64::new(c[0], 0.0))
            .add(&PhaseSymbol::momentum(1, 0).scale(C64::new(c[1], 0.0)));
        let g = PhaseSymbol::sin_mode(1, [2, 0])
            .scale(C64::new(c[2], 0.0))
            .mul(&PhaseSymbol::momentum(1, 0).scale(C64::new(c[3], 0.0)).add(&PhaseSymbol::constant(1, 1.0)));
        let fg = canonical_bracket(&f, &g).unwrap().eval([x, 0.0], [p, 0.0]);
        let gf = canonical_bracket(&g, &f).unwrap().eval([x, 0.0], [p, 0.0]);
        prop_assert!((fg + gf).norm() < 1e-10);
    }

    #[test]
    fn reciprocal_hbars_are_admissible(k in 1usize..8, m_frac in 0.0f64..1.0) {
        let n = 1usize << k;
        let m = 1 + ((n / 2 - 1) as f64 * m_frac) as usize;
        prop_assert_eq!(admissible_m(1.0 / m as f64, n).unwrap(), m);
        prop_assert!(admissible_m(1.0 / (m as f64 + 0.5), n).is_err());
    }

    #[test]
    fn dirac_configs_with_reciprocal_hbars_validate(ms in prop::collection::vec(1usize..=32, 1..5)) {
        let list: Vec<String> = ms.iter().map(|m| format!("\"1/{m}\"")).collect();
        let text = format!(
            "experiment = \"dirac-sweep\"\ndimension = 1\ngrid = 64\nhbars = [{}]\n",
            list.join(", ")
        );
        let (config, issues) = check(&parse_value(&text, false).unwrap());
        prop_assert!(issues.is_empty(), "{issues:?}");
        prop_assert_eq!(config.unwrap().hbars.unwrap().len(), ms.len());
    }

    #[test]
    fn haar_integration_is_seed_deterministic(seed in any::<u64>()) {
        let sys = lattice_system(1, 1).unwrap();
        let f = CylinderFunction::on(&sys, Group::SU2, 1, Expr::trace(MatExpr::slot(0)).abs2()).unwrap();
        let a = haar_integrate(&f, 64, seed).unwrap();
        let b = haar_integrate(&f, 64, seed).unwrap();
        prop_assert_eq!(a.mean, b.mean);
        prop_assert!(a.mean.re >= 0.0 && a.mean.re <= 4.0);
    }
}
