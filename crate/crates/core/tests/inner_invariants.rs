mod common;

use common::{inner_spec, upper_point};
use proptest::prelude::*;
use weyl_lab_core::inner::*;
use weyl_lab_core::Complex64 as C;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_symmetry(s in inner_spec(), z in upper_point()) {
        let p = s.value(z).unwrap() * s.value(z.conj()).unwrap().conj();
        prop_assert!((p - 1.0).norm() <= 1e-10);
    }

    #[test]
    fn contractive_above_unimodular_on_axis(s in inner_spec(), z in upper_point(), u in -50.0..50.0f64) {
        prop_assert!(s.value(z).unwrap().norm() < 1.0);
        prop_assert!((s.value(C::new(u, 0.0)).unwrap().norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn phase_matches_value(s in inner_spec(), u in -30.0..30.0f64) {
        let e = C::from_polar(1.0, s.theta(u));
        prop_assert!((e - s.value(C::new(u, 0.0)).unwrap()).norm() <= 1e-10);
        prop_assert!(s.phase_jet(u).unwrap()[0] > 0.0);
    }

    #[test]
    fn phase_derivative_is_second_order(s in inner_spec(), u in -10.0..10.0f64) {
        let d = s.phase_jet(u).unwrap();
        let err = |h: f64| ((s.theta(u + h) - s.theta(u - h)) / (2.0 * h) - d[0]).abs();
        // O(h²) with the θ‴/6 constant, plus rounding in the difference.
        prop_assert!(err(1e-3) <= d[2].abs() * 1e-6 / 6.0 + 1e-8);
        prop_assert!(err(1e-4) <= d[2].abs() * 1e-8 / 6.0 + 1e-9);
    }

    #[test]
    fn cayley_round_trip(s in inner_spec(), z in upper_point()) {
        let back = herglotz_to_inner(cayley_to_weyl(s.clone()));
        prop_assert!((back.value(z).unwrap() - s.value(z).unwrap()).norm() <= 1e-10);
    }

    #[test]
    fn weyl_function_is_herglotz(s in inner_spec(), z in upper_point()) {
        prop_assert!(cayley_to_weyl(s).eval(z).unwrap().im > 0.0);
    }

    #[test]
    fn congruence_defect_identity(s in inner_spec(), z in upper_point(), r in 0.0..0.9f64, a in -3.1..3.1f64) {
        let tau = C::from_polar(r, a);
        let params = MoebiusParams::new(C::new(1.0, 0.0), tau).unwrap();
        let t = congruence(s.clone(), params);
        let bz = s.value(z).unwrap();
        let want = (1.0 - tau.norm_sqr()) * (1.0 - bz.norm_sqr()) / (1.0 - tau.conj() * bz).norm_sqr();
        let got = t.ln_one_minus_abs_sq(z).exp();
        prop_assert!((got - want).abs() <= 1e-10 * want.max(1e-300) + 1e-14);
    }

    #[test]
    fn accurate_log_modulus(s in inner_spec(), z in upper_point()) {
        let direct = s.value(z).unwrap().norm().ln();
        prop_assert!((s.ln_abs(z) - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
    }
}

#[test]
fn herglotz_spec_maps_to_inner() {
    let m = HerglotzSpec::new(0.5, 1.0, vec![-1.0, 2.0], vec![0.3, 0.7]).unwrap();
    let b = herglotz_to_inner(m);
    for z in [C::new(0.1, 0.2), C::new(-3.0, 1.0), C::new(5.0, 4.0)] {
        assert!(b.value(z).unwrap().norm() < 1.0);
    }
    assert!((b.value(C::new(0.5, 0.0)).unwrap().norm() - 1.0).abs() < 1e-12);
}
