mod common;

use common::{inner_spec, upper_point};
use proptest::prelude::*;
use weyl_lab_core::geometry::*;
use weyl_lab_core::inner::*;
use weyl_lab_core::numerics::linspace;
use weyl_lab_core::vdt::{spectrum, BoundaryCondition, Window};
use weyl_lab_core::Complex64 as C;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn curvature_is_conjugation_symmetric(s in inner_spec(), z in upper_point()) {
        let (a, b) = (omega(&s, z).unwrap(), omega(&s, z.conj()).unwrap());
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn curvature_is_nonnegative(s in inner_spec(), z in upper_point(), u in -20.0..20.0f64) {
        prop_assert!(omega(&s, z).unwrap() >= -1e-9);
        prop_assert!(omega(&s, C::new(u, 0.0)).unwrap() >= -1e-9);
    }

    #[test]
    fn schwarzian_of_weyl_function(s in inner_spec(), u in -6.0..6.0f64) {
        // Stay away from the poles of M, where θ ∈ 2πℤ.
        prop_assume!((0.5 * s.theta(u)).sin().abs() > 0.1);
        let sm = schwarzian(&OnAxis(cayley_to_weyl(s.clone())), u).unwrap() / 6.0;
        prop_assert!((omega(&s, C::new(u, 0.0)).unwrap() - sm).abs() <= 1e-6);
    }

    #[test]
    fn curvature_continuous_onto_axis(s in inner_spec(), u in -6.0..6.0f64) {
        let w0 = omega(&s, C::new(u, 0.0)).unwrap();
        let d: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| (omega_with(&s, C::new(u, e), 0.0).unwrap() - w0).abs())
            .collect();
        // ω is even in Im λ, so the gap shrinks like ε², down to the cancellation floor.
        prop_assert!(d[1] <= 0.02 * d[0] + 1e-6);
        prop_assert!(d[2] <= 0.02 * d[1] + 1e-6);
    }

    #[test]
    fn eigenvalue_counts_within_bounds(b in 0.2..3.0f64, r in 2.0..60.0f64) {
        let s = InnerFunctionSpec::exponential(b).unwrap();
        let n = spectrum(&s, BoundaryCondition::real(1.0), Window::real(-r, r)).unwrap().len() as i64;
        let w = b * b / 12.0;
        let (lo, hi) = eigenvalue_count_bounds(w, w, r);
        prop_assert!(lo <= n && n <= hi, "{n} not in [{lo}, {hi}]");
    }
}

#[test]
fn sturm_picone_ordering() {
    let grid = linspace(0.0, 20.0, 2001);
    for (w1, w2) in [(0.1, 0.15), (0.5, 0.6), (1.0, 2.0)] {
        let p1 = CurvatureProfile::new(grid.clone(), vec![w1; grid.len()], CurvatureSource::Tabulated).unwrap();
        let p2 = CurvatureProfile::new(grid.clone(), vec![w2; grid.len()], CurvatureSource::Tabulated).unwrap();
        let z1 = sl_solve(&p1, [0.0, 20.0], (0.0, 1.0)).unwrap().zeros();
        let z2 = sl_solve(&p2, [0.0, 20.0], (1.0, 0.3)).unwrap().zeros();
        assert!(z1.len() >= 3);
        for pair in z1.windows(2) {
            assert!(z2.iter().any(|&x| x > pair[0] && x < pair[1]), "no zero in ({}, {})", pair[0], pair[1]);
        }
    }
}

#[test]
fn constant_curvature_zero_spacing() {
    let grid = linspace(-1.0, 31.0, 3201);
    let w = 0.25;
    let p = CurvatureProfile::new(grid.clone(), vec![w; grid.len()], CurvatureSource::Tabulated).unwrap();
    let z = sl_solve(&p, [0.0, 30.0], (0.0, 1.0)).unwrap().zeros();
    let gap = std::f64::consts::PI / (3.0 * w).sqrt();
    for pair in z.windows(2) {
        assert!((pair[1] - pair[0] - gap).abs() < 1e-6);
    }
}

#[test]
fn chi_matches_phase_speed_at_axis() {
    let s = InnerFunctionSpec::new(C::new(0.0, 1.0), 0.7, vec![Zero::new(C::new(1.0, 0.5), 2)]).unwrap();
    for u in linspace(-5.0, 5.0, 41) {
        let on = chi(&s, C::new(u, 0.0)).unwrap();
        let near = chi_with(&s, C::new(u, 1e-7), 0.0).unwrap();
        assert!((on - near).abs() < 1e-5 * on.max(1.0));
    }
}
