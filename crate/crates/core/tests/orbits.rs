use std::f64::consts::PI;

use kt_core::orbits::{
    act_on_kt, apply_point, canonicalize, classify_pair, derived_invariants, foci,
    joint_invariants, DEFAULT_CLASS_TOL,
};
use kt_core::solver::bd_residual;
use kt_core::{
    eh_canonical_kt, kt_components_at, kt_to_polar_components, lincomb, polar_kt_at, KtParams,
    Point2, PotentialSpec, SE2Element,
};
use proptest::prelude::*;

fn element() -> impl Strategy<Value = SE2Element> {
    (-3.0..3.0f64, -3.0..3.0f64, -PI..PI).prop_map(|(a, b, t)| SE2Element::new(a, b, t))
}

/// Polar/EH pairs, with each offset zero a third of the time.
fn pair() -> impl Strategy<Value = (KtParams, KtParams)> {
    let offset = prop_oneof![Just(0.0), -2.0..2.0f64, -2.0..2.0f64];
    (offset.clone(), offset, 1.0..9.0f64)
        .prop_map(|(a, b, l)| (polar_kt_at(a, b), eh_canonical_kt(l).unwrap()))
}

fn params() -> impl Strategy<Value = KtParams> {
    proptest::array::uniform6(-2.0..2.0f64).prop_map(|b| KtParams::new(b).unwrap())
}

proptest! {
    #[test]
    fn group_law_on_points_and_tensors(g in element(), h in element(), k in params(), x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let gh = g.compose(&h);
        let p = Point2::new(x, y);
        let (l, r) = (apply_point(&gh, p), apply_point(&g, apply_point(&h, p)));
        prop_assert!((l.x - r.x).abs() < 1e-12 && (l.y - r.y).abs() < 1e-12);
        let (l, r) = (act_on_kt(&gh, &k), act_on_kt(&g, &act_on_kt(&h, &k)));
        prop_assert!(l.max_abs_diff(&r) < 1e-12 * r.norm().max(1.0));
        let back = act_on_kt(&g.inverse(), &act_on_kt(&g, &k));
        prop_assert!(back.max_abs_diff(&k) < 1e-11 * k.norm().max(1.0));
    }

    #[test]
    fn action_is_pushforward(g in element(), k in params(), x in -2.0..2.0f64, y in -2.0..2.0f64) {
        // (g·K)(g p) = R K(p) Rᵀ
        let p = Point2::new(x, y);
        let moved = kt_components_at(&act_on_kt(&g, &k), apply_point(&g, p)).unwrap();
        let (s, c) = g.p3().sin_cos();
        let want = kt_components_at(&k, p).unwrap().congruence([[c, -s], [s, c]]);
        prop_assert!(moved.max_abs_diff(&want) < 1e-10 * k.norm().max(1.0) * 25.0);
    }

    #[test]
    fn joint_invariants_are_invariant(g in element(), (a, b) in pair()) {
        let i0 = joint_invariants(&a, &b).unwrap().to_array();
        let i1 = joint_invariants(&act_on_kt(&g, &a), &act_on_kt(&g, &b)).unwrap().to_array();
        for (x, y) in i1.iter().zip(i0) {
            prop_assert!((x - y).abs() < 1e-9 * y.abs().max(1.0), "{i0:?} vs {i1:?}");
        }
    }

    #[test]
    fn foci_are_equivariant(g in element(), (_, k) in pair()) {
        let f = foci(&k).unwrap();
        let fg = foci(&act_on_kt(&g, &k)).unwrap();
        let (p, m) = (apply_point(&g, f.s_plus), apply_point(&g, f.s_minus));
        let d = |u: Point2, v: Point2| u.dist_sq(&v).sqrt();
        let err = d(fg.s_plus, p).max(d(fg.s_minus, m)).min(d(fg.s_plus, m).max(d(fg.s_minus, p)));
        prop_assert!(err < 1e-10);
    }

    #[test]
    fn pair_labels_are_invariant(g in element(), (a, b) in pair()) {
        let c0 = classify_pair(&a, &b, DEFAULT_CLASS_TOL).unwrap();
        let c1 = classify_pair(&act_on_kt(&g, &a), &act_on_kt(&g, &b), DEFAULT_CLASS_TOL).unwrap();
        prop_assert_eq!(c0.class, c1.class);
    }

    #[test]
    fn offsets_are_recovered(a in -2.0..2.0f64, b in 0.0..2.0f64, l in 1.0..9.0f64, g in element()) {
        let (ka, kb) = (polar_kt_at(a, b), eh_canonical_kt(l).unwrap());
        let d = derived_invariants(&act_on_kt(&g, &ka), &act_on_kt(&g, &kb)).unwrap();
        prop_assert!((d.a_rec.unwrap() - a.abs()).abs() < 1e-8);
        prop_assert!((d.b_rec.unwrap() - b).abs() < 1e-6);
        prop_assert!((d.k2_sq - l).abs() < 1e-9 * l);
    }

    #[test]
    fn canonical_form_round_trips(k in params()) {
        prop_assume!(k.b6().abs() > 0.1);
        let (g, c) = canonicalize(&k).unwrap();
        prop_assert!(c.b3().abs() + c.b4().abs() + c.b5().abs() < 1e-9 * k.norm().max(1.0) * 100.0);
        prop_assert!((c.b1() - c.b2()) / c.b6() >= -1e-9);
        let back = act_on_kt(&g.inverse(), &c);
        prop_assert!(back.max_abs_diff(&k) < 1e-9 * k.norm().max(1.0) * 100.0);
    }

    #[test]
    fn polar_components_preserve_quadratic_form(k in params(), r in 0.2..3.0f64, t in -PI..PI, p1 in -2.0..2.0f64, p2 in -2.0..2.0f64) {
        // a covector p in cartesian components has polar components
        // (p_r, p_θ) = (c p1 + s p2, r(−s p1 + c p2)); the form is unchanged
        let (s, c) = t.sin_cos();
        let cart = kt_components_at(&k, Point2::new(r * c, r * s)).unwrap();
        let pol = kt_to_polar_components(&k, kt_core::PolarPoint2::new(r, t).unwrap()).unwrap();
        let (pr, pt) = (c * p1 + s * p2, r * (-s * p1 + c * p2));
        let lhs = cart.quadratic_form(p1, p2);
        let rhs = pol.quadratic_form(pr, pt);
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()) * 10.0, "{lhs} vs {rhs}");
    }

    #[test]
    fn residual_is_linear(c in proptest::array::uniform3(-2.0..2.0f64), a in params(), b in params(), d in params(), x in 0.3..2.0f64, y in 0.3..2.0f64) {
        let spec = PotentialSpec::sw(1.0, 2.0, 3.0);
        let p = Point2::new(x, y);
        let k = lincomb(&c, &[a, b, d]).unwrap();
        prop_assume!(!k.is_zero());
        let lhs = bd_residual(&k, &spec, p).unwrap();
        let rhs: f64 = [a, b, d].iter().zip(c).map(|(k, ci)| ci * bd_residual(k, &spec, p).unwrap()).sum();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()) * 1e3);
    }
}
