//! De Branges functions and the five functional-model kernels.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::inner::{jet_mul, HerglotzEvaluator, InnerEvaluator, InnerFunctionSpec, Jet};
use crate::numerics::fit_line;
use crate::numerics::quad::{integrate_pieces, QuadOptions};
use crate::vdt::{analytic_zeros, spectrum, BoundaryCondition, Root, Window};

const I: C = C { re: 0.0, im: 1.0 };
const ZERO: C = C { re: 0.0, im: 0.0 };

/// Below this `|λ − μ̄|` kernels switch to the Taylor expansion of the
/// numerator about `μ̄`; the direct quotient would lose about half the digits.
const DIAGONAL_GAP: f64 = 1e-6;

/// Hermite-Biehler function `e` with `e♯/e = B`:
/// `e(λ) = κ e^{−ibλ/2} Π(λ − λ̄ₖ)^{mₖ}`.
#[derive(Debug, Clone)]
pub struct DeBrangesFunction {
    pub spec: InnerFunctionSpec,
    pub kappa: C,
}

impl DeBrangesFunction {
    /// `(e, e′, e″, e‴)`.
    pub fn jet(&self, lambda: C) -> Jet {
        let s = -0.5 * I * self.spec.mean_type_b;
        let ex = self.kappa * (s * lambda).exp();
        let mut j: Jet = [ex, ex * s, ex * s * s, ex * s * s * s];
        for z in &self.spec.zeros {
            let f: Jet = [lambda - z.location.conj(), C::new(1.0, 0.0), ZERO, ZERO];
            for _ in 0..z.multiplicity {
                j = jet_mul(&j, &f);
            }
        }
        j
    }

    pub fn e(&self, lambda: C) -> C {
        self.jet(lambda)[0]
    }

    /// Jet of `e♯(λ) = conj e(λ̄)`.
    pub fn sharp_jet(&self, lambda: C) -> Jet {
        self.jet(lambda.conj()).map(|z| z.conj())
    }

    pub fn e_sharp(&self, lambda: C) -> C {
        self.sharp_jet(lambda)[0]
    }

    /// `A = (e + e♯)/2` and `B = i(e − e♯)/2`, real on ℝ. The real zeros
    /// of `B` are the eigenvalues of `T₁`, those of `A` of `T₋₁`.
    pub fn components(&self, lambda: C) -> (C, C) {
        let (e, s) = (self.e(lambda), self.e_sharp(lambda));
        (0.5 * (e + s), 0.5 * I * (e - s))
    }
}

/// Deterministic probe points in ℂ₊ for construction checks.
fn probe_points(n: usize) -> Vec<C> {
    let g = 0.618_033_988_749_894_9;
    (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) * g;
            C::new(8.0 * (t.fract() - 0.5), 0.1 + 2.0 * ((k as f64 + 0.5) / n as f64))
        })
        .collect()
}

pub fn debranges_from_inner(spec: &InnerFunctionSpec) -> Result<DeBrangesFunction> {
    // e♯/e = (κ̄/κ)·e^{ibλ}Π((λ−λₖ)/(λ−λ̄ₖ))^m, so κ̄/κ must be Γ = γΠ(λ̄ₖ/λₖ)^m.
    let mut gamma_total = spec.gamma;
    for z in &spec.zeros {
        gamma_total *= (z.location.conj() / z.location).powu(z.multiplicity);
    }
    let kappa = gamma_total.sqrt().conj() / gamma_total.norm().sqrt();
    let e = DeBrangesFunction { spec: spec.clone(), kappa };
    let mut worst: f64 = 0.0;
    for z in probe_points(20) {
        let b = spec.value(z)?;
        let ratio = e.e_sharp(z) / e.e(z);
        worst = worst.max((ratio - b).norm() / (1.0 + b.norm()));
        if !(e.e(z).norm() > e.e_sharp(z).norm()) {
            worst = worst.max(1.0);
        }
    }
    if worst > 1e-10 {
        return Err(Error::ConstructionMismatch { mismatch: worst });
    }
    Ok(e)
}

/// `iN(λ)/(λ − μ̄)` for a numerator with `N(μ̄) = 0`; near the diagonal the
/// jet of `N` at `μ̄` replaces the quotient.
fn divided(n_at: impl Fn(C) -> C, jet_at_conj: impl Fn() -> [C; 3], lambda: C, mu: C) -> C {
    let d = lambda - mu.conj();
    if d.norm() > DIAGONAL_GAP * (1.0 + mu.norm()) {
        I * n_at(lambda) / d
    } else {
        let [n1, n2, n3] = jet_at_conj();
        I * (n1 + n2 * d / 2.0 + n3 * d * d / 6.0)
    }
}

/// `K₁(λ,μ) = i[e(λ)conj e(μ) − e♯(λ)conj e♯(μ)]/(λ − μ̄)`.
pub fn kernel_k1(e: &DeBrangesFunction, lambda: C, mu: C) -> C {
    let (em, sm) = (e.e(mu).conj(), e.e_sharp(mu).conj());
    divided(
        |l| e.e(l) * em - e.e_sharp(l) * sm,
        || {
            let (j, s) = (e.jet(mu.conj()), e.sharp_jet(mu.conj()));
            [j[1] * em - s[1] * sm, j[2] * em - s[2] * sm, j[3] * em - s[3] * sm]
        },
        lambda,
        mu,
    )
}

/// `K₂(λ,μ) = i[1 − B(λ)conj B(μ)]/(λ − μ̄)`.
pub fn kernel_k2<E: InnerEvaluator + ?Sized>(b: &E, lambda: C, mu: C) -> Result<C> {
    let bm = b.value(mu)?.conj();
    let d = lambda - mu.conj();
    if d.norm() > DIAGONAL_GAP * (1.0 + mu.norm()) {
        return Ok(I * (1.0 - b.value(lambda)? * bm) / d);
    }
    let j = b.jet(mu.conj())?;
    Ok(-I * bm * (j[1] + j[2] * d / 2.0 + j[3] * d * d / 6.0))
}

/// `K₃(λ,μ) = [M(λ) − conj M(μ)]/(λ − μ̄)`.
pub fn kernel_k3<H: HerglotzEvaluator + ?Sized>(m: &H, lambda: C, mu: C) -> Result<C> {
    let mm = m.eval(mu)?.conj();
    let d = lambda - mu.conj();
    if d.norm() > DIAGONAL_GAP * (1.0 + mu.norm()) {
        return Ok((m.eval(lambda)? - mm) / d);
    }
    let j = m.jet(mu.conj())?;
    Ok(j[1] + j[2] * d / 2.0 + j[3] * d * d / 6.0)
}

/// `K₄(u,v) = K₁(u,v)/(N(u)N(v))` with `N(u) = √K₁(u,u)`.
pub fn kernel_k4(e: &DeBrangesFunction, u: f64, v: f64) -> Result<f64> {
    let (cu, cv) = (C::new(u, 0.0), C::new(v, 0.0));
    let du = kernel_k1(e, cu, cu).re;
    let dv = kernel_k1(e, cv, cv).re;
    if du <= 1e-14 || dv <= 1e-14 {
        return Err(Error::DegenerateNorm { value: du.min(dv) });
    }
    if u == v {
        return Ok(1.0);
    }
    Ok(kernel_k1(e, cu, cv).re / (du * dv).sqrt())
}

/// `K₅(λᵢ,λⱼ) = θ′(λᵢ)δᵢⱼ` on the spectrum of `T₁`.
pub fn kernel_k5(spec: &InnerFunctionSpec, li: f64, lj: f64) -> Result<f64> {
    for x in [li, lj] {
        let t = spec.theta(x);
        let residue = t - 2.0 * PI * (t / (2.0 * PI)).round();
        if residue.abs() > 1e-8 {
            return Err(Error::NotAnEigenvalue { at: x, residue });
        }
    }
    if li == lj {
        Ok(spec.phase_jet(li)?[0])
    } else {
        Ok(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelId {
    K1,
    K2,
    K3,
    K4,
    K5,
}

#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub points: Vec<C>,
    pub entries: DMatrix<C>,
    pub kernel_id: KernelId,
}

impl KernelMatrix {
    /// Gram matrix `[K(pᵢ, pⱼ)]`.
    pub fn build<K: FnMut(C, C) -> Result<C>>(points: &[C], kernel_id: KernelId, mut k: K) -> Result<Self> {
        let n = points.len();
        let mut m = DMatrix::from_element(n, n, ZERO);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = k(points[i], points[j])?;
            }
        }
        Ok(Self { points: points.to_vec(), entries: m, kernel_id })
    }

    pub fn trace(&self) -> f64 {
        (0..self.points.len()).map(|i| self.entries[(i, i)].re).sum()
    }

    /// Largest `|Kᵢⱼ − conj Kⱼᵢ|`, relative to the largest entry.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.points.len();
        let scale = self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst / scale
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        let h = (&self.entries + self.entries.adjoint()) * C::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn is_psd(&self) -> bool {
        self.hermitian_defect() <= 1e-10 && self.min_eigenvalue() >= -1e-8 * self.trace().abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    pub value: C,
    /// Estimate of the omitted terms: the edge terms continued over a span
    /// equal to their distance from `λ`.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Sampling series `f(λ) = Σ f(λⱼ) K₂(λ,λⱼ)/θ′(λⱼ)` over the spectrum of `T₁`.
/// Every eigenvalue within `radius` of `Re λ` must be sampled.
pub fn sample_reconstruct(spec: &InnerFunctionSpec, samples: &[(f64, C)], lambda: C, radius: f64) -> Result<Reconstruction> {
    let window = Window::real(lambda.re - radius, lambda.re + radius);
    let needed = spectrum(spec, BoundaryCondition::real(1.0), window)?;
    if let Some(r) = needed
        .iter()
        .find(|r| !samples.iter().any(|(x, _)| (x - r.location.re).abs() <= 1e-8 * (1.0 + x.abs())))
    {
        return Err(Error::InsufficientWindow { missing: r.location.re });
    }
    let mut sum = ZERO;
    let mut terms: Vec<(f64, C)> = Vec::with_capacity(samples.len());
    for &(x, fx) in samples {
        let node = C::new(x, 0.0);
        let t = if node == lambda {
            fx
        } else {
            fx * kernel_k2(spec, lambda, node)? / spec.phase_jet(x)?[0]
        };
        sum += t;
        terms.push((x, t));
    }
    let mut tail = 0.0;
    if samples.len() >= 2 {
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let spacing = (terms[terms.len() - 1].0 - terms[0].0) / (terms.len() - 1) as f64;
        for (x, t) in [terms[0], terms[terms.len() - 1]] {
            tail += t.norm() * (x - lambda.re).abs() / spacing.max(f64::MIN_POSITIVE);
        }
    }
    Ok(Reconstruction { value: sum, tail_bound: tail, terms: samples.len() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    /// `∫_{−U}^{U} |f/e|² dx/2π`.
    pub value: f64,
    /// Power-law extrapolation of the rest of the line.
    pub tail: f64,
    pub decay_exponent: f64,
}

impl NormReport {
    pub fn total(&self) -> f64 {
        self.value + self.tail
    }
}

/// `‖f‖²` in the de Branges space of `e`, truncated at `±u_max`.
pub fn he_norm<F: Fn(f64) -> C>(f: F, e: &DeBrangesFunction, u_max: f64) -> Result<NormReport> {
    he_inner(&f, &f, e, u_max).map(|(v, tail, p)| NormReport { value: v.re, tail, decay_exponent: p })
}

/// `⟨f, g⟩ = ∫ f conj g /|e|² dx/2π` on `[−U, U]`, with the tail of `|f/e|²+|g/e|²`
/// and its fitted decay exponent.
pub fn he_inner<F: Fn(f64) -> C, G: Fn(f64) -> C>(f: &F, g: &G, e: &DeBrangesFunction, u_max: f64) -> Result<(C, f64, f64)> {
    let w = |x: f64| e.e(C::new(x, 0.0)).norm_sqr();
    let opts = QuadOptions::tol(1e-13, 1e-11);
    let pieces = 16 + (4.0 * u_max).ceil() as usize;
    let re = integrate_pieces(|x| (f(x) * g(x).conj()).re / w(x), -u_max, u_max, pieces, &opts)?;
    let im = integrate_pieces(|x| (f(x) * g(x).conj()).im / w(x), -u_max, u_max, pieces, &opts)?;
    let value = C::new(re.value, im.value) / (2.0 * PI);
    // Decay of the envelope over the last decade.
    let xs: Vec<f64> = (0..=20).map(|k| u_max * 10f64.powf(-1.0 + k as f64 / 20.0)).collect();
    let env: Vec<f64> = xs
        .iter()
        .map(|&x| (f(x).norm_sqr() + g(x).norm_sqr()) / w(x) + (f(-x).norm_sqr() + g(-x).norm_sqr()) / w(-x))
        .collect();
    if env.iter().all(|&v| v == 0.0) {
        return Ok((value, 0.0, f64::NEG_INFINITY));
    }
    // The running maximum from the right smooths out oscillating zeros.
    let mut upper = env.clone();
    for k in (0..upper.len() - 1).rev() {
        upper[k] = upper[k].max(upper[k + 1]);
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = upper.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    let p = fit_line(&lx, &ly)?.slope;
    if p >= -1.0 {
        return Err(Error::NonDecaying { exponent: p });
    }
    let last = *upper.last().unwrap();
    let tail = 0.5 * last * u_max / (-p - 1.0) / (2.0 * PI);
    Ok((value, tail, p))
}

/// `G = e·(e♯)′ − e′·e♯`; its zeros mark boundary conditions with a multiple eigenvalue.
pub fn discriminant_g(e: &DeBrangesFunction, lambda: C) -> C {
    let (j, s) = (e.jet(lambda), e.sharp_jet(lambda));
    j[0] * s[1] - j[1] * s[0]
}

/// Zeros of `G` in the square `|Re λ|, |Im λ| < r`.
pub fn discriminant_zeros(e: &DeBrangesFunction, r: f64) -> Result<Vec<Root>> {
    analytic_zeros(
        |z| {
            let (j, s) = (e.jet(z), e.sharp_jet(z));
            Ok((j[0] * s[1] - j[1] * s[0], j[0] * s[2] - j[2] * s[0]))
        },
        Window::square(r),
    )
}

/// The boundary condition `e♯(λ₀)/e(λ₀)` whose extension has `λ₀` as a
/// multiple eigenvalue, for a zero `λ₀` of `G`.
pub fn multiple_eigenvalue_condition(e: &DeBrangesFunction, lambda0: C) -> BoundaryCondition {
    let (a, s) = (e.e(lambda0), e.e_sharp(lambda0));
    if a == ZERO {
        BoundaryCondition::Infinity
    } else {
        BoundaryCondition::Finite(s / a)
    }
}
