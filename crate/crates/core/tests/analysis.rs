use kt_core::analysis::{
    cartesian_angle_check, characterize_sw, default_scan_set, degeneracy_study, invariance_audit,
    ttw_scan, SwStatus, Verdict,
};
use kt_core::orbits::PairClass;
use kt_core::solver::SamplingConfig;
use proptest::prelude::*;

fn cfg() -> SamplingConfig {
    SamplingConfig::default()
}

#[test]
fn only_unit_k_is_multiseparable_for_distinct_alpha_beta() {
    // with α ≠ β only k = ±1 leaves a third compatible tensor
    let ks = default_scan_set();
    let rows = ttw_scan(&ks, 1.0, 2.0, 3.0, &cfg(), 1e-8);
    for r in &rows {
        assert!(r.error.is_none(), "{r:?}");
        let want = if r.k.abs() == 1.0 { 3 } else { 2 };
        assert_eq!(r.dim, Some(want), "k = {}", r.k);
    }
}

#[test]
fn half_integer_k_with_equal_couplings_is_sw_type() {
    // α/cos²(θ/2) + α/sin²(θ/2) = 4α/sin²θ, so k = 1/2 gives ω r² + 4α/y²
    let rows = ttw_scan(&[0.5, -0.5], 1.0, 1.0, 1.0, &cfg(), 1e-8);
    assert!(rows.iter().all(|r| r.dim == Some(3)));
}

#[test]
fn scan_verdicts_stable_across_counts_and_tolerances() {
    let ks = [1.0, -1.0, 2.0, -2.0, 1.5, 0.5, 2.0 / 3.0, 0.4, 3.0, std::f64::consts::SQRT_2];
    let verdicts = |n: usize, tol: f64| -> Vec<Option<Verdict>> {
        ttw_scan(&ks, 1.0, 2.0, 3.0, &cfg().with_count(n), tol)
            .into_iter()
            .map(|r| r.verdict)
            .collect()
    };
    let base = verdicts(240, 1e-7);
    for (n, tol) in [(480, 1e-7), (240, 1e-9), (480, 1e-9)] {
        assert_eq!(verdicts(n, tol), base, "n = {n}, tol = {tol}");
    }
}

#[test]
fn scan_rows_keep_input_order_and_flag_specials() {
    let ks = [0.25, std::f64::consts::FRAC_PI_3, -1.5, 0.0];
    let rows = ttw_scan(&ks, 1.0, 2.0, 3.0, &cfg(), 1e-8);
    let got: Vec<f64> = rows.iter().map(|r| r.k).collect();
    assert_eq!(got, ks);
    let flags: Vec<bool> = rows.iter().map(|r| r.special_value).collect();
    assert_eq!(flags, [true, false, true, false]);
    assert!(rows[3].error.is_some() && rows[3].dim.is_none());
}

#[test]
fn cartesian_angle_examples() {
    let c = cfg();
    assert!(cartesian_angle_check(1.0, 0.0, 1.0, 1.0, 1.0, &c, 1e-8).unwrap());
    assert!(!cartesian_angle_check(2.0, 0.0, 1.0, 1.0, 1.0, &c, 1e-8).unwrap());
    assert!(!cartesian_angle_check(1.0, std::f64::consts::FRAC_PI_4, 1.0, 2.0, 3.0, &c, 1e-8).unwrap());
    // α = β is symmetric under the diagonal swap, which does not help a
    // single rotated cartesian tensor
    assert!(!cartesian_angle_check(1.0, 0.3, 1.0, 1.0, 1.0, &c, 1e-8).unwrap());
}

#[test]
fn sw_degenerate_families_are_reported() {
    let r = characterize_sw(1.0, 0.0, 0.0, &cfg(), 1e-8).unwrap();
    assert_eq!(r.status, SwStatus::DegenerateFamily);
    assert_eq!(r.nullspace.dim, 4);
    let r = characterize_sw(0.0, 0.0, 0.0, &cfg(), 1e-8).unwrap();
    assert_eq!((r.status, r.nullspace.dim), (SwStatus::DegenerateFamily, 6));
}

#[test]
fn audit_is_deterministic_and_clean() {
    let a = invariance_audit(200, 9);
    assert_eq!(a, invariance_audit(200, 9));
    assert!(a.passed(), "{:?}", a.failures);
    let one = invariance_audit(1, 0);
    assert_eq!(one.label_checks, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn characterization_is_scale_invariant(c in 0.1..10.0f64) {
        let a = characterize_sw(1.0, 2.0, 3.0, &cfg(), 1e-8).unwrap();
        let b = characterize_sw(c, 2.0 * c, 3.0 * c, &cfg(), 1e-8).unwrap();
        prop_assert_eq!(a.nullspace.dim, b.nullspace.dim);
        prop_assert_eq!(
            a.pair_class.map(|p| p.class),
            b.pair_class.map(|p| p.class)
        );
        prop_assert!(b.theorem_holds);
    }

    #[test]
    fn surviving_dimension_depends_on_zero_pattern(
        a in prop_oneof![Just(0.0), 0.3..2.0f64, -2.0..-0.3f64],
        b in prop_oneof![Just(0.0), 0.3..2.0f64, -2.0..-0.3f64],
        ell in 1.0..9.0f64,
    ) {
        let row = degeneracy_study(a, b, ell, &cfg(), 1e-8).unwrap();
        let want = match (a == 0.0, b == 0.0) {
            (false, false) => 0,
            (true, false) | (false, true) => 1,
            (true, true) => 3,
        };
        prop_assert_eq!(row.surviving_family.dim, want);
        if a == 0.0 && b == 0.0 {
            prop_assert_eq!(row.pair_class.class, PairClass::SWCanonical);
        }
    }
}
