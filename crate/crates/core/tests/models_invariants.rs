mod common;

use std::f64::consts::PI;

use common::{inner_spec, upper_point};
use proptest::prelude::*;
use weyl_lab_core::inner::*;
use weyl_lab_core::models::*;
use weyl_lab_core::numerics::linspace;
use weyl_lab_core::vdt::*;
use weyl_lab_core::Complex64 as C;

fn family() -> InnerFunctionSpec {
    InnerFunctionSpec::new(C::new(1.0, 0.0), 1.0, vec![Zero::simple(C::new(0.0, 1.0)), Zero::simple(C::new(2.0, 1.0))]).unwrap()
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kernels_intertwine(s in inner_spec(), l in upper_point(), mu in upper_point()) {
        let e = debranges_from_inner(&s).unwrap();
        let m = cayley_to_weyl(s.clone());
        let k1 = kernel_k1(&e, l, mu);
        let k2 = kernel_k2(&s, l, mu).unwrap();
        let k3 = kernel_k3(&m, l, mu).unwrap();
        prop_assert!(rel(k1, e.e(l) * e.e(mu).conj() * k2) <= 1e-10);
        let (ml, mm) = (m.eval(l).unwrap(), m.eval(mu).unwrap());
        prop_assert!(rel(k2, 2.0 * k3 / ((ml + C::i()) * (mm + C::i()).conj())) <= 1e-10);
    }

    #[test]
    fn gram_matrices_are_psd(s in inner_spec(), pts in prop::collection::vec(upper_point(), 1..=12), reals in prop::collection::vec(-5.0..5.0f64, 1..=12)) {
        let e = debranges_from_inner(&s).unwrap();
        let m = cayley_to_weyl(s.clone());
        let mut reals = reals;
        reals.sort_by(f64::total_cmp);
        reals.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        let rp: Vec<C> = reals.iter().map(|&x| C::new(x, 0.0)).collect();
        let grams = [
            KernelMatrix::build(&pts, KernelId::K1, |a, b| Ok(kernel_k1(&e, a, b))).unwrap(),
            KernelMatrix::build(&pts, KernelId::K2, |a, b| kernel_k2(&s, a, b)).unwrap(),
            KernelMatrix::build(&pts, KernelId::K3, |a, b| kernel_k3(&m, a, b)).unwrap(),
            KernelMatrix::build(&rp, KernelId::K4, |a, b| kernel_k4(&e, a.re, b.re).map(|x| C::new(x, 0.0))).unwrap(),
        ];
        for g in &grams {
            prop_assert!(g.min_eigenvalue() >= -1e-8 * g.trace(), "{:?}: {} vs trace {}", g.kernel_id, g.min_eigenvalue(), g.trace());
            prop_assert!(g.hermitian_defect() <= 1e-10 * g.trace().max(1.0));
        }
    }
}

#[test]
fn k5_gram_on_the_spectrum() {
    let s = family();
    let eig: Vec<C> = spectrum(&s, BoundaryCondition::real(1.0), Window::real(-15.0, 15.0))
        .unwrap()
        .iter()
        .map(|r| C::new(r.location.re, 0.0))
        .collect();
    let g = KernelMatrix::build(&eig, KernelId::K5, |a, b| kernel_k5(&s, a.re, b.re).map(|x| C::new(x, 0.0))).unwrap();
    assert!(g.is_psd());
    assert!(matches!(kernel_k5(&s, 0.123, 0.123), Err(weyl_lab_core::Error::NotAnEigenvalue { .. })));
}

/// A kernel column `K₁(·, μ)` scaled to unit norm, with its first derivative.
struct Column {
    e: DeBrangesFunction,
    mu: C,
    scale: f64,
}

impl Column {
    fn new(e: DeBrangesFunction, mu: C) -> Self {
        let scale = 1.0 / kernel_k1(&e, mu, mu).re.sqrt();
        Self { e, mu, scale }
    }

    fn value(&self, l: C) -> C {
        self.scale * kernel_k1(&self.e, l, self.mu)
    }

    /// Numerator `e(λ)conj e(μ) − e♯(λ)conj e♯(μ)` and its derivative; it
    /// vanishes at `μ̄` on top of the column's zeros.
    fn numerator(&self, l: C) -> (C, C) {
        let (em, sm) = (self.e.e(self.mu).conj(), self.e.e_sharp(self.mu).conj());
        let (j, s) = (self.e.jet(l), self.e.sharp_jet(l));
        (j[0] * em - s[0] * sm, j[1] * em - s[1] * sm)
    }
}

#[test]
fn column_norm_and_pointwise_bound() {
    let s = family();
    let e = debranges_from_inner(&s).unwrap();
    let col = Column::new(e.clone(), C::new(0.5, 1.0));
    let n = he_norm(|x| col.value(C::new(x, 0.0)), &e, 200.0).unwrap();
    assert!((n.total() - 1.0).abs() < 1e-3, "norm² {}", n.total());
    let scale = 1.0 / n.total().sqrt();
    for l in [C::new(0.0, 0.5), C::new(3.0, 2.0), C::new(-4.0, -1.0), C::new(1.0, 0.0)] {
        let f = scale * col.value(l);
        assert!(f.norm_sqr() <= kernel_k1(&e, l, l).re * (1.0 + 1e-6));
    }
}

#[test]
fn column_zero_count_below_characteristic() {
    let s = family();
    let e = debranges_from_inner(&s).unwrap();
    let mu = C::new(0.5, 1.0);
    let col = Column::new(e, mu);
    let rmax = 24.0;
    let roots: Vec<Root> = analytic_zeros(|z| Ok(col.numerator(z)), Window::square(rmax))
        .unwrap()
        .into_iter()
        .filter(|r| (r.location - mu.conj()).norm() > 1e-6)
        .collect();
    let gaps: Vec<f64> = [3.0, 6.0, 12.0, 24.0]
        .iter()
        .map(|&r| counting_function(&roots, r) - charfn_tf(&s, r).unwrap())
        .collect();
    // One constant fitted on the first two radii bounds the rest.
    let c = gaps[0].max(gaps[1]);
    assert!(gaps[2..].iter().all(|&g| g <= c + 0.25), "{gaps:?}");
}

#[test]
fn column_growth_below_twice_debranges() {
    let s = family();
    let e = debranges_from_inner(&s).unwrap();
    let col = Column::new(e.clone(), C::new(-1.0, 0.7));
    let excess: Vec<f64> = [4.0, 8.0, 16.0, 32.0]
        .iter()
        .map(|&r| {
            let tf = nevanlinna_t_entire(|z| col.value(z), r).unwrap();
            let te = nevanlinna_t_entire(|z| e.e(z), r).unwrap();
            (tf - 2.0 * te) / r.ln()
        })
        .collect();
    // T_f − 2T_e stays below C·ln r with a small C (here it is negative throughout).
    assert!(excess.iter().all(|&x| x <= 0.5), "{excess:?}");
}

#[test]
fn components_carry_the_self_adjoint_spectra() {
    let s = family();
    let e = debranges_from_inner(&s).unwrap();
    let t1 = spectrum(&s, BoundaryCondition::real(1.0), Window::real(-20.0, 20.0)).unwrap();
    let tm1 = spectrum(&s, BoundaryCondition::real(-1.0), Window::real(-20.0, 20.0)).unwrap();
    for r in &t1 {
        let (a, b) = e.components(r.location);
        assert!(b.norm() <= 1e-9 * a.norm());
    }
    for r in &tm1 {
        let (a, b) = e.components(r.location);
        assert!(a.norm() <= 1e-9 * b.norm());
    }
    let mut all: Vec<(f64, bool)> = t1.iter().map(|r| (r.location.re, true)).chain(tm1.iter().map(|r| (r.location.re, false))).collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    assert!(all.windows(2).all(|w| w[0].1 != w[1].1));
    for u in linspace(-5.0, 5.0, 11) {
        let (a, b) = e.components(C::new(u, 0.0));
        assert!(a.im.abs() <= 1e-10 * a.norm().max(1.0) && b.im.abs() <= 1e-10 * b.norm().max(1.0));
    }
}

#[test]
fn sampling_needs_the_whole_window() {
    let s = InnerFunctionSpec::exponential(2.0 * PI).unwrap();
    let samples: Vec<(f64, C)> = (-5..=5).map(|n| (n as f64, C::new(1.0, 0.0))).collect();
    let r = sample_reconstruct(&s, &samples, C::new(0.3, 0.0), 10.0);
    assert!(matches!(r, Err(weyl_lab_core::Error::InsufficientWindow { .. })));
}

#[test]
fn multiple_eigenvalues_from_the_discriminant() {
    let s = family();
    let e = debranges_from_inner(&s).unwrap();
    for z in discriminant_zeros(&e, 6.0).unwrap() {
        let l0 = z.location;
        assert!(discriminant_g(&e, l0).norm() < 1e-8 * (1.0 + e.e(l0).norm_sqr()));
        if let BoundaryCondition::Finite(c) = multiple_eigenvalue_condition(&e, l0) {
            // B − c has a double root at λ₀.
            let j = s.jet(l0).unwrap();
            assert!((j[0] - c).norm() < 1e-8 && j[1].norm() < 1e-6 * (1.0 + j[2].norm()));
        }
    }
}
