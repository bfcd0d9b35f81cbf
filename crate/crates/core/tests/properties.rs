mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;

use okounkov_core::convex::{convex_hull, RationalPolytope};
use okounkov_core::exactmath::{graded_monomials, normal_form, rat, series_solve_branch, Branch, HomogPoly, LocalChart, Rat};
use okounkov_core::okounkov::{graded_system_basis, value_set, SystemKind};
use okounkov_core::valuation::{order_along_hypersurface, FlagValuator};
use okounkov_core::varieties::{make_case, CaseStudy, EcPoint, EllipticCurveFp};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| !r.is_zero())
}

/// Random form of the given degree with small integer coefficients.
fn form(num_vars: usize, degree: u32) -> impl Strategy<Value = HomogPoly> {
    let monos = graded_monomials(num_vars, degree);
    prop::collection::vec(-3i64..=3, monos.len()).prop_map(move |cs| {
        let coeffs: Vec<Rat> = cs.iter().map(|&c| Rat::from_integer(c.into())).collect();
        HomogPoly::from_coefficients(num_vars, degree, &monos, &coeffs)
    })
}

fn section(cs: &CaseStudy) -> impl Strategy<Value = HomogPoly> {
    let cs2 = cs.clone();
    let n = cs.ambient_vars();
    (1u32..=2)
        .prop_flat_map(move |deg| form(n, deg))
        .prop_map(move |s| cs2.reduce(&s))
        .prop_filter("nonzero modulo the relation", |s| !s.is_zero())
}

fn additivity(name: &str) {
    let cs = make_case(name, 1).unwrap();
    let val = FlagValuator::new(&cs.flag).unwrap();
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(100));
    runner
        .run(&(section(&cs), section(&cs)), |(s, t)| {
            let a = val.evaluate(&s).unwrap();
            let b = val.evaluate(&t).unwrap();
            let prod = cs.reduce(&(&s * &t));
            let ab = val.evaluate(&prod).unwrap();
            prop_assert_eq!(&ab.vector, &a.vector.add(&b.vector));
            prop_assert_eq!(&ab.leading_unit, &(&a.leading_unit * &b.leading_unit));
            // the membership route agrees with the production route
            prop_assert_eq!(&common::valuation_by_membership(&cs, &s), &a.vector.0);
            Ok(())
        })
        .unwrap();
}

#[test]
fn valuation_additive_p2() {
    additivity("p2");
}

#[test]
fn valuation_additive_p3() {
    additivity("p3");
}

#[test]
fn valuation_additive_quadric() {
    additivity("quadric_surface");
}

#[test]
fn valuation_additive_fermat() {
    additivity("fermat_cubic");
}

fn fermat() -> HomogPoly {
    HomogPoly::parse("x^3 + y^3 + z^3 + w^3", &["x", "y", "z", "w"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in nonzero_rat(), b in small_rat(), c in small_rat()) {
        prop_assert_eq!(&a * a.recip(), Rat::one());
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert!(a.denom() > &0.into());
    }

    #[test]
    fn normal_form_laws(p in form(4, 4), q in form(4, 4)) {
        let f = fermat();
        let np = normal_form(&p, &f, 3).unwrap();
        prop_assert_eq!(normal_form(&np, &f, 3).unwrap(), np.clone());
        let nq = normal_form(&q, &f, 3).unwrap();
        prop_assert_eq!(normal_form(&(&p + &q), &f, 3).unwrap(), &np + &nq);
        prop_assert!(np.terms().all(|(e, _)| e[3] < 3));
        // p - nf(p) is an exact multiple of F
        let diff = &p - &np;
        let (quot, rem) = okounkov_core::exactmath::Reducer::new(f.clone(), 3).unwrap().div_rem(&diff);
        prop_assert!(rem.is_zero());
        prop_assert_eq!(&quot * &f, diff);
    }

    #[test]
    fn order_shifts_by_one(s in form(4, 2)) {
        let f = fermat();
        let w = HomogPoly::var(4, 3);
        prop_assume!(!normal_form(&s, &f, 3).unwrap().is_zero());
        let k = order_along_hypersurface(&s, &w, Some(&f)).unwrap();
        prop_assert_eq!(order_along_hypersurface(&(&s * &w), &w, Some(&f)).unwrap(), k + 1);
    }

    #[test]
    fn hull_idempotent_and_order_free(
        pts in prop::collection::vec(prop::collection::vec(small_rat(), 2), 1..12),
        seed in any::<u64>(),
    ) {
        let hull = convex_hull(&pts).unwrap();
        prop_assert_eq!(&convex_hull(hull.vertices()).unwrap(), &hull);
        let mut shuffled = pts.clone();
        let len = shuffled.len();
        for i in 0..len {
            shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % len);
        }
        prop_assert_eq!(&convex_hull(&shuffled).unwrap(), &hull);
        for p in &pts {
            prop_assert!(hull.contains_point(p));
        }
    }

    #[test]
    fn hull_in_three_dimensions(pts in prop::collection::vec(prop::collection::vec(small_rat(), 3), 1..10)) {
        let hull: RationalPolytope = convex_hull(&pts).unwrap();
        prop_assert_eq!(&convex_hull(hull.vertices()).unwrap(), &hull);
        let mut rev = pts.clone();
        rev.reverse();
        prop_assert_eq!(convex_hull(&rev).unwrap(), hull);
    }
}

#[test]
fn branch_residual_and_certified_order() {
    let names = ["x", "y", "z"];
    let curve = HomogPoly::parse("x^3 + y^3 + z^3", &names).unwrap();
    let point = [Rat::one(), -Rat::one(), Rat::zero()];
    let chart = LocalChart { chart: 0, parameter: 2 };
    for precision in [4, 8, 16, 33] {
        let u = series_solve_branch(&curve, &point, chart, precision).unwrap();
        assert_eq!(u.precision(), precision);
        let branch = Branch::plane(&curve, &point, chart, precision).unwrap();
        assert_eq!(branch.pullback(&curve).valuation(), None);
    }
    for g in ["z", "x + y", "x", "y^2 + x*y", "x^2 + 2*x*y + y^2"] {
        let g = HomogPoly::parse(g, &names).unwrap();
        let low = Branch::plane(&curve, &point, chart, 16).unwrap().pullback(&g);
        let high = Branch::plane(&curve, &point, chart, 32).unwrap().pullback(&g);
        let k = low.valuation().unwrap();
        assert_eq!(high.valuation(), Some(k));
        assert_eq!(low.coeff(k), high.coeff(k));
    }
}

#[test]
fn graded_system_products_land_in_higher_levels() {
    for name in ["p2", "quadric_surface", "fermat_cubic"] {
        let cs = make_case(name, 1).unwrap();
        let v1 = graded_system_basis(&cs, SystemKind::Complete, 1).unwrap();
        let v2 = graded_system_basis(&cs, SystemKind::Complete, 2).unwrap();
        let v3 = graded_system_basis(&cs, SystemKind::Complete, 3).unwrap();
        let span3: Vec<Vec<Rat>> = v3.iter().map(|s| coefficient_row(&cs, s, 3)).collect();
        for a in &v1 {
            for b in &v2 {
                let prod = cs.reduce(&(a * b));
                let row = coefficient_row(&cs, &prod, 3);
                assert!(okounkov_core::exactmath::rat_linear_solve(&span3, &row).unwrap().is_some());
            }
        }
        // powers basis lies in the complete piece
        let p2 = graded_system_basis(&cs, SystemKind::Powers, 2).unwrap();
        let span2: Vec<Vec<Rat>> = v2.iter().map(|s| coefficient_row(&cs, s, 2)).collect();
        for s in &p2 {
            assert!(okounkov_core::exactmath::rat_linear_solve(&span2, &coefficient_row(&cs, s, 2)).unwrap().is_some());
        }
    }
}

fn coefficient_row(cs: &CaseStudy, s: &HomogPoly, m: u32) -> Vec<Rat> {
    let index = graded_monomials(cs.ambient_vars(), m).into_iter().enumerate().map(|(i, e)| (e, i)).collect();
    s.coefficients_in(&index)
}

#[test]
fn value_set_invariant_under_basis_change() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for name in ["p2", "quadric_surface", "fermat_cubic"] {
        let cs = make_case(name, 1).unwrap();
        let val = cs.valuator().unwrap();
        let basis = graded_system_basis(&cs, SystemKind::Complete, 2).unwrap();
        let expected = value_set(&basis, &val).unwrap();
        let n = basis.len();
        let mut changes = 0;
        while changes < 20 {
            let m: Vec<Vec<Rat>> =
                (0..n).map(|_| (0..n).map(|_| Rat::from_integer(rng.gen_range(-2i64..=2).into())).collect()).collect();
            if okounkov_core::exactmath::linalg::determinant(&m).is_zero() {
                continue;
            }
            let mixed: Vec<HomogPoly> = m
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&basis)
                        .fold(HomogPoly::zero(cs.ambient_vars(), 2), |acc, (c, b)| acc.add_scaled(b, c))
                })
                .collect();
            assert_eq!(value_set(&mixed, &val).unwrap(), expected, "{name}");
            changes += 1;
        }
    }
}

fn curve() -> EllipticCurveFp {
    EllipticCurveFp::new(101, 1, 1).unwrap()
}

fn point_index() -> impl Strategy<Value = usize> {
    0..curve().order()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ec_associative(i in point_index(), j in point_index(), k in point_index()) {
        let e = curve();
        let (p, q, r) = (e.points()[i], e.points()[j], e.points()[k]);
        let left = e.ec_add(&e.ec_add(&p, &q).unwrap(), &r).unwrap();
        let right = e.ec_add(&p, &e.ec_add(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(e.ec_add(&p, &q).unwrap(), e.ec_add(&q, &p).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ec_mul_additive(i in point_index(), m in -50i64..50, k in -50i64..50) {
        let e = curve();
        let p = e.points()[i];
        let lhs = e.ec_mul(m + k, &p).unwrap();
        let rhs = e.ec_add(&e.ec_mul(m, &p).unwrap(), &e.ec_mul(k, &p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(e.ec_mul(e.order() as i64, &p).unwrap(), EcPoint::Infinity);
    }
}
