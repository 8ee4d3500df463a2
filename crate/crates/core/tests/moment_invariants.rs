use proptest::prelude::*;
use weyl_lab_core::geometry::{omega, schwarzian, OnAxis};
use weyl_lab_core::moment::*;
use weyl_lab_core::numerics::linspace;
use weyl_lab_core::vdt::height;
use weyl_lab_core::Complex64 as C;

fn squares() -> JacobiSpec {
    JacobiSpec::power_rule(60, 2.0, 1.0, 1.0, 0.0).unwrap()
}

fn family() -> impl Strategy<Value = JacobiSpec> {
    (2.0..3.0f64, 0.5..2.0f64, -0.5..0.5f64).prop_map(|(p, s, b)| JacobiSpec::power_rule(40, p, 1.0, s, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn determinant_is_one(r in 0.0..20.0f64, a in -3.2..3.2f64) {
        let n = nevanlinna_entries(&squares(), C::from_polar(r, a), Truncation::Full).unwrap();
        prop_assert!((n.det() - 1.0).norm() < 1e-6);
    }

    #[test]
    fn polynomial_wronskian(s in family(), x in -5.0..5.0f64, y in -5.0..5.0f64) {
        let z = C::new(x, y);
        for n in 0..s.n_max() {
            // Rounding is relative to the size of the two products that cancel.
            let p = |k| poly_first(&s, k, z).unwrap().norm();
            let q = |k| poly_second(&s, k, z).unwrap().norm();
            let scale = 1.0 + s.a[n] * (p(n) * q(n + 1) + p(n + 1) * q(n));
            prop_assert!((wronskian(&s, n, z).unwrap() - 1.0).norm() <= 1e-12 * scale, "n = {n}");
        }
    }

    #[test]
    fn resolvents_are_herglotz(s in family(), t in -3.0..3.0f64, x in -10.0..10.0f64, y in 0.01..10.0f64) {
        let z = C::new(x, y);
        prop_assert!(resolvent_i(&s, TParam::real(t), z, Truncation::Full).unwrap().im > 0.0);
        prop_assert!(resolvent_i(&s, TParam::Infinity, z, Truncation::Full).unwrap().im > 0.0);
    }

    #[test]
    fn curvature_routes_and_bounds(s in family(), u in -3.0..3.0f64) {
        let tr = Truncation::Full;
        let w = curvature_from_polys(&s, u, tr).unwrap();
        prop_assert!(w >= -1e-9);
        prop_assert!(w <= curvature_bound_from_polys(&s, u, tr).unwrap() * (1.0 + 1e-12));
        let b = JacobiInner { spec: s.clone(), trunc: tr };
        prop_assert!((w - omega(&b, C::new(u, 0.0)).unwrap()).abs() <= 1e-5 * (1.0 + w));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn moments_from_both_routes(s in family(), t in -2.0..2.0f64) {
        let tr = Truncation::Full;
        let atoms = von_neumann_measure(&s, TParam::real(t), default_window(&s, tr).unwrap(), tr).unwrap();
        for i in 0..=4 {
            let lhs: f64 = atoms.iter().map(|(x, m)| m * x.powi(i)).sum();
            let rhs = moments_from_jacobi(&s, i as usize).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-4 * rhs.abs().max(1.0), "i = {i}: {lhs} vs {rhs}");
        }
        prop_assert!(atoms.iter().all(|a| a.1 > 0.0));
    }
}

#[test]
fn spectra_interlace_and_never_meet() {
    let s = squares();
    let tr = Truncation::Full;
    let w = (-200.0, 200.0);
    let params = [TParam::real(-1.0), TParam::real(0.0), TParam::real(0.5), TParam::real(3.0), TParam::Infinity];
    let spectra: Vec<Vec<f64>> = params.iter().map(|&t| von_neumann_spectrum(&s, t, w, tr).unwrap()).collect();
    for i in 0..spectra.len() {
        for j in i + 1..spectra.len() {
            let mut all: Vec<(f64, usize)> = spectra[i].iter().map(|&x| (x, i)).chain(spectra[j].iter().map(|&x| (x, j))).collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0));
            assert!(all.windows(2).all(|p| p[0].1 != p[1].1 && (p[1].0 - p[0].0) > 1e-8), "{i} vs {j}");
        }
    }
}

#[test]
fn schwarzian_of_the_weyl_quotient() {
    let s = squares();
    let tr = Truncation::Full;
    let m = OnAxis(JacobiWeyl { spec: s.clone(), trunc: tr });
    let poles = von_neumann_spectrum(&s, TParam::Infinity, (-4.0, 4.0), tr).unwrap();
    for u in linspace(-3.0, 3.0, 61) {
        if poles.iter().any(|p| (p - u).abs() < 0.05) {
            continue;
        }
        let sm = schwarzian(&m, u).unwrap() / 6.0;
        assert!((sm - curvature_from_polys(&s, u, tr).unwrap()).abs() <= 1e-5, "u = {u}");
    }
}

#[test]
fn sturm_pair_on_the_standard_grid() {
    let s = squares();
    let tr = Truncation::Full;
    let grid = linspace(-3.0, 3.0, 601);
    let rep = sturm_solutions(&s, &grid, tr).unwrap();
    assert!(rep.residual <= 1e-4, "residual {}", rep.residual);
    assert!((rep.solution.wronskian + 1.0).abs() < 1e-10);
    assert!(rep.solution.wronskian_drift < 1e-6);
    // Zeros of y₂ are the zeros of d.
    let d_zeros = von_neumann_spectrum(&s, TParam::Infinity, (-3.0, 3.0), tr).unwrap();
    let y2 = &rep.solution.y2_values;
    let changes = (1..grid.len()).filter(|&k| y2[k - 1] * y2[k] < 0.0 || y2[k] == 0.0).count();
    assert_eq!(changes, d_zeros.len());
    for x in d_zeros {
        let k = grid.iter().position(|&g| g >= x).unwrap();
        assert!(y2[k - 1].signum() != y2[k].signum() || y2[k] == 0.0 || y2[k - 1] == 0.0);
    }
}

#[test]
fn characteristic_matches_height_and_entries() {
    let s = squares();
    let tr = Truncation::Full;
    let b = JacobiInner { spec: s.clone(), trunc: tr };
    assert_eq!(tf_moment(&s, 0.0, tr).unwrap(), 0.0);
    let mut prev = 0.0;
    for r in [5.0, 10.0, 20.0, 40.0] {
        let t = tf_moment(&s, r, tr).unwrap();
        assert!(t >= prev);
        prev = t;
        let h = height(&b, r).unwrap();
        assert!((t - h).abs() <= 1.5 * r.ln(), "r = {r}: T = {t}, h = {h}");
    }
}

#[test]
fn section_cap_errors() {
    let s = squares();
    assert!(matches!(poly_first(&s, 61, C::new(1.0, 0.0)), Err(weyl_lab_core::Error::IndexBeyondCap { .. })));
    assert!(matches!(moments_from_jacobi(&s, 119), Err(weyl_lab_core::Error::IndexBeyondCap { .. })));
    assert!(moments_from_jacobi(&s, 118).is_ok());
    assert!(matches!(
        nevanlinna_entries(&s, C::new(1.0, 0.0), Truncation::Section(60)),
        Err(weyl_lab_core::Error::IndexBeyondCap { .. })
    ));
    assert!(JacobiSpec::new(vec![1.0, -1.0], vec![0.0, 0.0], "bad").is_err());
    assert!(JacobiSpec::new(vec![1.0], vec![0.0, 0.0], "bad").is_err());
}

#[test]
fn shorter_sections_are_consistent_models() {
    let s = squares();
    for k in [8, 20, 40] {
        let tr = Truncation::Section(k);
        let z = C::new(1.3, 0.4);
        assert!((nevanlinna_entries(&s, z, tr).unwrap().det() - 1.0).norm() < 1e-8);
        assert!(shift_and_pedersen(&s, z, tr).unwrap().mismatch < 1e-8);
    }
}
