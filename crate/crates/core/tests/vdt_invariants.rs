use std::f64::consts::PI;

use weyl_lab_core::inner::{InnerFunctionSpec, Zero};
use weyl_lab_core::numerics::geomspace;
use weyl_lab_core::vdt::*;
use weyl_lab_core::Complex64 as C;

fn family() -> InnerFunctionSpec {
    InnerFunctionSpec::new(C::new(1.0, 0.0), 1.0, vec![Zero::simple(C::new(0.0, 1.0)), Zero::simple(C::new(2.0, 1.0))]).unwrap()
}

fn spread(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
}

#[test]
fn first_main_theorem_residual_is_bounded() {
    let s = family();
    let grid = geomspace(10.0, 200.0, 10);
    for bc in [
        BoundaryCondition::real(0.0),
        BoundaryCondition::real(0.5),
        BoundaryCondition::Finite(C::new(0.0, 0.5)),
        BoundaryCondition::real(1.0),
        BoundaryCondition::real(-1.0),
    ] {
        let rep = defect(&s, bc, &grid, None).unwrap();
        let res: Vec<f64> = (0..grid.len()).map(|k| rep.h_values[k] - rep.n_values[k] - rep.m_values[k]).collect();
        // Fitted on [10, 100], then extended to 200.
        let half = grid.iter().position(|&r| r > 100.0 + 1e-9).unwrap();
        let (c_half, c_full) = (spread(&res[..half]), spread(&res));
        assert!(c_full < 0.5, "{bc:?}: spread {c_full}");
        assert!(c_full - c_half < 0.1, "{bc:?}: {c_half} → {c_full}");
    }
}

#[test]
fn spectra_partition_the_plane() {
    let s = family();
    let w = Window::rect((-30.0, 30.0), (-10.0, 10.0));
    let bcs = [
        BoundaryCondition::real(0.0),
        BoundaryCondition::real(0.5),
        BoundaryCondition::Finite(C::new(0.0, 0.5)),
        BoundaryCondition::real(1.0),
        BoundaryCondition::real(-1.0),
        BoundaryCondition::real(2.0),
        BoundaryCondition::Infinity,
    ];
    let spectra: Vec<Vec<Root>> = bcs.iter().map(|&bc| spectrum(&s, bc, w).unwrap()).collect();
    for i in 0..spectra.len() {
        assert!(!spectra[i].is_empty());
        for j in i + 1..spectra.len() {
            for a in &spectra[i] {
                for b in &spectra[j] {
                    assert!((a.location - b.location).norm() > 1e-8, "{:?} and {:?} share {}", bcs[i], bcs[j], a.location);
                }
            }
        }
    }
}

#[test]
fn self_adjoint_counting_tracks_height() {
    let s = family();
    let grid = geomspace(10.0, 400.0, 8);
    for c in [C::new(1.0, 0.0), C::new(-1.0, 0.0), C::from_polar(1.0, 1.0)] {
        let roots = spectrum(&s, BoundaryCondition::Finite(c), Window::real(-401.0, 401.0)).unwrap();
        let ratio = grid
            .iter()
            .map(|&r| (height(&s, r).unwrap() - counting_function(&roots, r)).abs() / r.ln())
            .fold(0.0, f64::max);
        assert!(ratio < 1.0, "c = {c}: |h − N|/ln r reaches {ratio}");
    }
}

#[test]
fn dissipative_defects_sum_to_at_most_one() {
    let s = InnerFunctionSpec::exponential(1.0).unwrap();
    let grid = geomspace(40.0, 400.0, 8);
    let total: f64 = [C::new(0.0, 0.0), C::new(0.5, 0.0), C::new(0.0, 0.5), C::new(-0.3, -0.3)]
        .iter()
        .map(|&c| defect(&s, BoundaryCondition::Finite(c), &grid, None).unwrap().defect_estimate)
        .sum();
    assert!(total <= 1.1, "sum of defects {total}");
}

#[test]
fn tf_band_against_height() {
    for s in [InnerFunctionSpec::exponential(1.0).unwrap(), family()] {
        let need: Vec<f64> = [8.0, 16.0, 32.0]
            .iter()
            .map(|&r| {
                let d = charfn_tf(&s, r).unwrap() - height(&s, r).unwrap();
                (d + 0.5 * r.ln()).max(-d - r.ln())
            })
            .collect();
        // The C fitted up to r = 16 still covers r = 32.
        assert!(need[2] <= need[0].max(need[1]) + 0.05, "{need:?}");
    }
}

#[test]
fn area_and_boundary_forms_agree() {
    let s = family();
    for r in [2.0, 7.5] {
        let a = charfn_tf(&s, r).unwrap();
        let b = charfn_tf_boundary(&s, r).unwrap();
        assert!((a - b).abs() < 1e-6, "r = {r}: {a} vs {b}");
    }
}

#[test]
fn height_is_order_one_type_b_over_pi() {
    let b = 1.7;
    let s = InnerFunctionSpec::exponential(b).unwrap();
    let grid = geomspace(10.0, 1000.0, 12);
    let h: Vec<f64> = grid.iter().map(|&r| height(&s, r).unwrap()).collect();
    let fit = order_type_fit(&grid, &h).unwrap();
    assert!((fit.order - 1.0).abs() < 1e-6);
    assert!((fit.type_ - b / PI).abs() < 1e-6);
}

#[test]
fn entire_function_zeros() {
    // sin(πz) on a square: the integers inside.
    let z = analytic_zeros(|z: C| Ok(((PI * z).sin(), PI * (PI * z).cos())), Window::square(3.5)).unwrap();
    let mut re: Vec<f64> = z.iter().map(|r| r.location.re).collect();
    re.sort_by(f64::total_cmp);
    assert_eq!(re.len(), 7);
    for (k, x) in re.iter().enumerate() {
        assert!((x - (k as f64 - 3.0)).abs() < 1e-10);
    }
}

#[test]
fn nevanlinna_characteristic_of_exponential() {
    // T(r, e^z) = r/π.
    for r in [1.0, 5.0, 20.0] {
        let t = nevanlinna_t_entire(|z: C| z.exp(), r).unwrap();
        assert!((t - r / PI).abs() < 1e-8);
    }
}
