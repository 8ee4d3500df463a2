//! Meromorphic inner functions `B(λ) = γ e^{ibλ} Π [(λ̄ₖ/λₖ)(λ−λₖ)/(λ−λ̄ₖ)]^mₖ`,
//! their phases, Herglotz functions and the Cayley/Möbius transforms between them.

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};

/// Value and first three derivatives at a point.
pub type Jet = [C; 4];

const I: C = C { re: 0.0, im: 1.0 };

/// Leibniz rule for products of jets.
pub fn jet_mul(f: &Jet, g: &Jet) -> Jet {
    [
        f[0] * g[0],
        f[1] * g[0] + f[0] * g[1],
        f[2] * g[0] + 2.0 * f[1] * g[1] + f[0] * g[2],
        f[3] * g[0] + 3.0 * f[2] * g[1] + 3.0 * f[1] * g[2] + f[0] * g[3],
    ]
}

/// Quotient rule for jets; fails where the denominator vanishes.
pub fn jet_div(n: &Jet, d: &Jet, at: C) -> Result<Jet> {
    if d[0] == C::new(0.0, 0.0) {
        return Err(Error::PoleEvaluation { at });
    }
    let q0 = n[0] / d[0];
    let q1 = (n[1] - q0 * d[1]) / d[0];
    let q2 = (n[2] - 2.0 * q1 * d[1] - q0 * d[2]) / d[0];
    let q3 = (n[3] - 3.0 * q2 * d[1] - 3.0 * q1 * d[2] - q0 * d[3]) / d[0];
    Ok([q0, q1, q2, q3])
}

/// Phase derivatives `(θ′, θ″, θ‴)` on ℝ from a jet of a unimodular function.
pub fn phase_jet_from(j: &Jet) -> [f64; 3] {
    let l1 = j[1] / j[0];
    let l2 = j[2] / j[0] - l1 * l1;
    let l3 = j[3] / j[0] - 3.0 * l1 * l2 - l1 * l1 * l1;
    // ln B = iθ on the axis
    [l1.im, l2.im, l3.im]
}

/// A value `e^{ln_scale}·numerator/denominator`; finite unless the denominator vanishes.
/// The log scale keeps `e^{ibλ}` representable far from the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveValue {
    pub numerator: C,
    pub denominator: C,
    pub ln_scale: f64,
}

impl ProjectiveValue {
    pub fn finite(z: C) -> Self {
        Self { numerator: z, denominator: C::new(1.0, 0.0), ln_scale: 0.0 }
    }

    pub fn is_infinite(&self) -> bool {
        self.denominator == C::new(0.0, 0.0)
    }

    /// Scalar value; raises instead of returning infinities.
    pub fn value(&self, at: C) -> Result<C> {
        if self.is_infinite() {
            return Err(Error::PoleEvaluation { at });
        }
        let z = self.numerator / self.denominator * self.ln_scale.exp();
        if z.re.is_finite() && z.im.is_finite() {
            Ok(z)
        } else {
            Err(Error::Overflow { at })
        }
    }

    /// `ln |value|`, exact in the log scale; `±∞` at zeros and poles.
    pub fn ln_abs(&self) -> f64 {
        self.numerator.norm().ln() - self.denominator.norm().ln() + self.ln_scale
    }

    /// Folds the scale into whichever side shrinks, so both parts stay finite.
    pub fn folded(&self) -> (C, C) {
        if self.ln_scale >= 0.0 {
            (self.numerator, self.denominator * (-self.ln_scale).exp())
        } else {
            (self.numerator * self.ln_scale.exp(), self.denominator)
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut n = self.numerator * other.numerator;
        let mut d = self.denominator * other.denominator;
        let s = n.norm().max(d.norm());
        if s > 0.0 && s.is_finite() {
            n /= s;
            d /= s;
        }
        Self { numerator: n, denominator: d, ln_scale: self.ln_scale + other.ln_scale }
    }

    /// `ln` of the chordal distance `[value, c]`; `None` stands for the point ∞.
    pub fn ln_chordal(&self, c: Option<C>) -> f64 {
        let l = self.ln_abs();
        // ln √(1+|B|²), stable for any |B|
        let half_softplus = if l > 0.0 { l + 0.5 * (-2.0 * l).exp().ln_1p() } else { 0.5 * (2.0 * l).exp().ln_1p() };
        match c {
            None => -half_softplus,
            Some(c) if c == C::new(0.0, 0.0) => l - half_softplus,
            Some(c) => {
                let cc = 0.5 * c.norm_sqr().ln_1p();
                if l < -600.0 {
                    c.norm().ln() - cc
                } else if l > 600.0 {
                    -cc
                } else {
                    // ln|B − c| = ln|n − c·d| − ln|d|, no division by a tiny d
                    let (n, d) = self.folded();
                    (n - c * d).norm().ln() - d.norm().ln() - half_softplus - cc
                }
            }
        }
    }
}

/// Anything that evaluates a meromorphic inner function.
pub trait InnerEvaluator: Send + Sync {
    fn eval_proj(&self, lambda: C) -> ProjectiveValue;

    /// `(B, B′, B″, B‴)`; fails at poles or when `B` overflows.
    fn jet(&self, lambda: C) -> Result<Jet>;

    /// `(θ′, θ″, θ‴)` at a real point.
    fn phase_jet(&self, u: f64) -> Result<[f64; 3]> {
        Ok(phase_jet_from(&self.jet(C::new(u, 0.0))?))
    }

    fn value(&self, lambda: C) -> Result<C> {
        self.eval_proj(lambda).value(lambda)
    }

    /// `ln |B(λ)|`. Implementations override this when they can keep
    /// relative accuracy as `λ` approaches the axis.
    fn ln_abs(&self, lambda: C) -> f64 {
        self.eval_proj(lambda).ln_abs()
    }

    /// `ln(1 − |B(λ)|²)` for `λ ∈ ℂ₊`.
    fn ln_one_minus_abs_sq(&self, lambda: C) -> f64 {
        ln_one_minus_exp2(self.ln_abs(lambda))
    }
}

/// `ln(1 − e^{2l})` for `l < 0`.
pub(crate) fn ln_one_minus_exp2(l: f64) -> f64 {
    let x = 2.0 * l;
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

macro_rules! forward_inner {
    ($t:ty) => {
        impl<E: InnerEvaluator + ?Sized> InnerEvaluator for $t {
            fn eval_proj(&self, lambda: C) -> ProjectiveValue {
                (**self).eval_proj(lambda)
            }
            fn jet(&self, lambda: C) -> Result<Jet> {
                (**self).jet(lambda)
            }
            fn phase_jet(&self, u: f64) -> Result<[f64; 3]> {
                (**self).phase_jet(u)
            }
            fn ln_abs(&self, lambda: C) -> f64 {
                (**self).ln_abs(lambda)
            }
            fn ln_one_minus_abs_sq(&self, lambda: C) -> f64 {
                (**self).ln_one_minus_abs_sq(lambda)
            }
        }
    };
}

forward_inner!(&E);
forward_inner!(Box<E>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub location: C,
    pub multiplicity: u32,
}

impl Zero {
    pub fn new(location: C, multiplicity: u32) -> Self {
        Self { location, multiplicity }
    }

    pub fn simple(location: C) -> Self {
        Self::new(location, 1)
    }
}

/// Riesz-Smirnov data of a meromorphic inner function.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerFunctionSpec {
    pub gamma: C,
    pub mean_type_b: f64,
    pub zeros: Vec<Zero>,
    theta0: f64,
}

impl InnerFunctionSpec {
    pub fn new(gamma: C, mean_type_b: f64, zeros: Vec<Zero>) -> Result<Self> {
        if ((gamma.norm() - 1.0).abs()) > 1e-12 || !gamma.re.is_finite() || !gamma.im.is_finite() {
            return Err(Error::Validation(format!("gamma must be unimodular, |gamma| = {}", gamma.norm())));
        }
        if !(mean_type_b >= 0.0) || !mean_type_b.is_finite() {
            return Err(Error::Validation(format!("mean_type_b must be >= 0, got {mean_type_b}")));
        }
        for z in &zeros {
            if z.multiplicity == 0 {
                return Err(Error::Validation("zero multiplicity must be positive".into()));
            }
            if !(z.location.im > 0.0) || !z.location.re.is_finite() || !z.location.im.is_finite() {
                return Err(Error::Validation(format!("zero {} must lie in the upper half-plane", z.location)));
            }
        }
        let mut spec = Self { gamma, mean_type_b, zeros, theta0: 0.0 };
        let b0 = spec.eval_proj(C::new(0.0, 0.0)).value(C::new(0.0, 0.0))?;
        let mut arg0 = b0.arg();
        if arg0 <= -PI {
            arg0 = PI;
        }
        let partial: f64 = spec
            .zeros
            .iter()
            .map(|z| 2.0 * z.multiplicity as f64 * (-z.location.re / z.location.im).atan())
            .sum();
        spec.theta0 = arg0 - partial;
        Ok(spec)
    }

    pub fn exponential(b: f64) -> Result<Self> {
        Self::new(C::new(1.0, 0.0), b, vec![])
    }

    pub fn blaschke(zeros: &[C]) -> Result<Self> {
        Self::new(C::new(1.0, 0.0), 0.0, zeros.iter().map(|&z| Zero::simple(z)).collect())
    }

    /// Blaschke sum `Σ m·Im λₖ/|λₖ|²` for the stored zeros.
    pub fn blaschke_sum(&self) -> f64 {
        self.zeros.iter().map(|z| z.multiplicity as f64 * z.location.im / z.location.norm_sqr()).sum()
    }

    /// Additive constant in the phase, fixed by `θ(0) ∈ (−π, π]`.
    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    fn log_derivative(&self, lambda: C, k: u32) -> Result<C> {
        let mut s = if k == 1 { I * self.mean_type_b } else { C::new(0.0, 0.0) };
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let fact = (1..k).map(|j| j as f64).product::<f64>();
        for z in &self.zeros {
            let a = lambda - z.location;
            let b = lambda - z.location.conj();
            if a == C::new(0.0, 0.0) || b == C::new(0.0, 0.0) {
                return Err(Error::PoleEvaluation { at: lambda });
            }
            s += z.multiplicity as f64 * sign * fact * (a.powi(-(k as i32)) - b.powi(-(k as i32)));
        }
        Ok(s)
    }

    pub fn theta(&self, u: f64) -> f64 {
        let mut t = self.mean_type_b * u + self.theta0;
        for z in &self.zeros {
            t += 2.0 * z.multiplicity as f64 * ((u - z.location.re) / z.location.im).atan();
        }
        t
    }
}

impl InnerEvaluator for InnerFunctionSpec {
    fn eval_proj(&self, lambda: C) -> ProjectiveValue {
        let b = self.mean_type_b;
        let mut pv = ProjectiveValue {
            numerator: self.gamma * C::from_polar(1.0, b * lambda.re),
            denominator: C::new(1.0, 0.0),
            ln_scale: -b * lambda.im,
        };
        for z in &self.zeros {
            let l = z.location;
            let f = ProjectiveValue {
                numerator: l.conj() * (lambda - l),
                denominator: l * (lambda - l.conj()),
                ln_scale: 0.0,
            };
            for _ in 0..z.multiplicity {
                pv = pv.mul(&f);
            }
        }
        pv
    }

    fn jet(&self, lambda: C) -> Result<Jet> {
        let ib = I * self.mean_type_b;
        let e = self.gamma * (ib * lambda).exp();
        if !(e.re.is_finite() && e.im.is_finite()) {
            return Err(Error::Overflow { at: lambda });
        }
        let mut j: Jet = [e, e * ib, e * ib * ib, e * ib * ib * ib];
        for z in &self.zeros {
            let l = z.location;
            let p = lambda - l.conj();
            if p == C::new(0.0, 0.0) {
                return Err(Error::PoleEvaluation { at: lambda });
            }
            // g = (λ̄ₖ/λₖ)(1 + (λ̄ₖ−λₖ)/(λ−λ̄ₖ))
            let k = l.conj() / l;
            let w = l.conj() - l;
            let f: Jet = [
                k * (lambda - l) / p,
                -k * w / (p * p),
                2.0 * k * w / (p * p * p),
                -6.0 * k * w / (p * p * p * p),
            ];
            for _ in 0..z.multiplicity {
                j = jet_mul(&j, &f);
            }
        }
        Ok(j)
    }

    fn phase_jet(&self, u: f64) -> Result<[f64; 3]> {
        let mut d = [self.mean_type_b, 0.0, 0.0];
        for z in &self.zeros {
            let m = z.multiplicity as f64;
            let x = u - z.location.re;
            let y = z.location.im;
            let q = x * x + y * y;
            d[0] += m * 2.0 * y / q;
            d[1] -= m * 4.0 * y * x / (q * q);
            d[2] += m * 4.0 * y * (3.0 * x * x - y * y) / (q * q * q);
        }
        Ok(d)
    }

    fn ln_abs(&self, lambda: C) -> f64 {
        // |λ−λₖ|² = |λ−λ̄ₖ|² − 4vyₖ
        let v = lambda.im;
        let mut l = -self.mean_type_b * v;
        for z in &self.zeros {
            let q = (lambda - z.location.conj()).norm_sqr();
            if q == 0.0 {
                return f64::INFINITY;
            }
            l += 0.5 * z.multiplicity as f64 * (-4.0 * v * z.location.im / q).ln_1p();
        }
        l
    }
}

/// `B(λ)` for order 0, `(ln B)^{(k)}(λ)` for orders 1 to 3.
pub fn eval_inner(spec: &InnerFunctionSpec, lambda: C, derivative_order: u32) -> Result<ProjectiveValue> {
    match derivative_order {
        0 => Ok(spec.eval_proj(lambda)),
        1..=3 => spec.log_derivative(lambda, derivative_order).map(ProjectiveValue::finite),
        k => Err(Error::Domain(format!("derivative order {k} not in 0..3"))),
    }
}

/// Continuous phase `θ(u)` (order 0) or its derivatives.
pub fn phase(spec: &InnerFunctionSpec, u: f64, derivative_order: u32) -> Result<f64> {
    match derivative_order {
        0 => Ok(spec.theta(u)),
        1..=3 => Ok(spec.phase_jet(u)?[derivative_order as usize - 1]),
        k => Err(Error::Domain(format!("derivative order {k} not in 0..3"))),
    }
}

/// `w = (a z + b)/(c z + d)` with `ad − bc ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moebius {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl Moebius {
    pub fn apply_proj(&self, z: &ProjectiveValue) -> ProjectiveValue {
        let zero = C::new(0.0, 0.0);
        if self.b == zero && self.c == zero {
            return ProjectiveValue {
                numerator: self.a * z.numerator,
                denominator: self.d * z.denominator,
                ln_scale: z.ln_scale,
            };
        }
        let (n, d) = z.folded();
        let mut num = self.a * n + self.b * d;
        let mut den = self.c * n + self.d * d;
        let s = num.norm().max(den.norm());
        if s > 0.0 && s.is_finite() {
            num /= s;
            den /= s;
        }
        ProjectiveValue { numerator: num, denominator: den, ln_scale: 0.0 }
    }

    /// Jet of `g∘f` by Faà di Bruno.
    pub fn compose(&self, f: &Jet, at: C) -> Result<Jet> {
        let q = self.c * f[0] + self.d;
        if q == C::new(0.0, 0.0) {
            return Err(Error::PoleEvaluation { at });
        }
        let g0 = (self.a * f[0] + self.b) / q;
        let g1 = (self.a * self.d - self.b * self.c) / (q * q);
        let g2 = -2.0 * self.c * g1 / q;
        let g3 = 6.0 * self.c * self.c * g1 / (q * q);
        Ok([
            g0,
            g1 * f[1],
            g2 * f[1] * f[1] + g1 * f[2],
            g3 * f[1] * f[1] * f[1] + 3.0 * g2 * f[1] * f[2] + g1 * f[3],
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusParams {
    pub gamma: C,
    pub tau: C,
}

impl MoebiusParams {
    pub fn new(gamma: C, tau: C) -> Result<Self> {
        if (gamma.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!("gamma must be unimodular, |gamma| = {}", gamma.norm())));
        }
        if !(tau.norm() < 1.0) {
            return Err(Error::Validation(format!("|tau| must be < 1, got {}", tau.norm())));
        }
        Ok(Self { gamma, tau })
    }

    pub fn moebius(&self) -> Moebius {
        Moebius { a: self.gamma, b: -self.gamma * self.tau, c: -self.tau.conj(), d: C::new(1.0, 0.0) }
    }
}

/// `γ(B − τ)/(1 − τ̄B)`.
#[derive(Debug, Clone)]
pub struct Congruence<E> {
    pub base: E,
    pub params: MoebiusParams,
}

pub fn congruence<E: InnerEvaluator>(base: E, params: MoebiusParams) -> Congruence<E> {
    Congruence { base, params }
}

impl<E: InnerEvaluator> InnerEvaluator for Congruence<E> {
    fn eval_proj(&self, lambda: C) -> ProjectiveValue {
        self.params.moebius().apply_proj(&self.base.eval_proj(lambda))
    }
    fn jet(&self, lambda: C) -> Result<Jet> {
        self.params.moebius().compose(&self.base.jet(lambda)?, lambda)
    }
    fn ln_one_minus_abs_sq(&self, lambda: C) -> f64 {
        // 1 − |B_τ|² = (1 − |τ|²)(1 − |B|²)/|1 − τ̄B|²
        let t = self.params.tau;
        let (n, d) = self.base.eval_proj(lambda).folded();
        let den = (d - t.conj() * n).norm_sqr() / d.norm_sqr();
        (-t.norm_sqr()).ln_1p() + self.base.ln_one_minus_abs_sq(lambda) - den.ln()
    }
}

/// Pointwise product of two inner functions.
#[derive(Debug, Clone)]
pub struct Product<E1, E2> {
    pub left: E1,
    pub right: E2,
}

impl<E1: InnerEvaluator, E2: InnerEvaluator> InnerEvaluator for Product<E1, E2> {
    fn eval_proj(&self, lambda: C) -> ProjectiveValue {
        self.left.eval_proj(lambda).mul(&self.right.eval_proj(lambda))
    }
    fn jet(&self, lambda: C) -> Result<Jet> {
        Ok(jet_mul(&self.left.jet(lambda)?, &self.right.jet(lambda)?))
    }
    fn phase_jet(&self, u: f64) -> Result<[f64; 3]> {
        let a = self.left.phase_jet(u)?;
        let b = self.right.phase_jet(u)?;
        Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]])
    }
    fn ln_abs(&self, lambda: C) -> f64 {
        self.left.ln_abs(lambda) + self.right.ln_abs(lambda)
    }
}

/// Anything that evaluates a meromorphic Herglotz function.
pub trait HerglotzEvaluator: Send + Sync {
    /// `(M, M′, M″, M‴)`.
    fn jet(&self, lambda: C) -> Result<Jet>;

    fn eval(&self, lambda: C) -> Result<C> {
        Ok(self.jet(lambda)?[0])
    }
}

impl<H: HerglotzEvaluator + ?Sized> HerglotzEvaluator for &H {
    fn jet(&self, lambda: C) -> Result<Jet> {
        (**self).jet(lambda)
    }
    fn eval(&self, lambda: C) -> Result<C> {
        (**self).eval(lambda)
    }
}

/// `M(λ) = c + dλ + Σ wₙ(1/(tₙ−λ) − tₙ/(1+tₙ²))`.
#[derive(Debug, Clone, PartialEq)]
pub struct HerglotzSpec {
    pub c: f64,
    pub d: f64,
    pub poles: Vec<f64>,
    pub weights: Vec<f64>,
}

impl HerglotzSpec {
    pub fn new(c: f64, d: f64, poles: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if !c.is_finite() || !(d >= 0.0) || !d.is_finite() {
            return Err(Error::Validation("c must be finite and d >= 0".into()));
        }
        if poles.len() != weights.len() {
            return Err(Error::Validation("poles and weights must have equal length".into()));
        }
        if poles.windows(2).any(|w| !(w[1] > w[0])) || poles.iter().any(|t| !t.is_finite()) {
            return Err(Error::Validation("poles must be finite and strictly increasing".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::Validation("weights must be positive".into()));
        }
        Ok(Self { c, d, poles, weights })
    }
}

impl HerglotzEvaluator for HerglotzSpec {
    fn jet(&self, lambda: C) -> Result<Jet> {
        let mut j = [C::new(self.c, 0.0) + self.d * lambda, C::new(self.d, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)];
        for (&t, &w) in self.poles.iter().zip(&self.weights) {
            let q = C::new(t, 0.0) - lambda;
            if q == C::new(0.0, 0.0) {
                return Err(Error::PoleEvaluation { at: lambda });
            }
            let r = 1.0 / q;
            j[0] += w * (r - t / (1.0 + t * t));
            j[1] += w * r * r;
            j[2] += 2.0 * w * r * r * r;
            j[3] += 6.0 * w * r * r * r * r;
        }
        Ok(j)
    }
}

pub fn herglotz_eval(spec: &HerglotzSpec, lambda: C) -> Result<C> {
    spec.eval(lambda)
}

/// `M = i(1 + B)/(1 − B)`.
#[derive(Debug, Clone)]
pub struct WeylFromInner<E> {
    pub inner: E,
}

pub fn cayley_to_weyl<E: InnerEvaluator>(inner: E) -> WeylFromInner<E> {
    WeylFromInner { inner }
}

const CAYLEY: Moebius = Moebius {
    a: C { re: 0.0, im: 1.0 },
    b: C { re: 0.0, im: 1.0 },
    c: C { re: -1.0, im: 0.0 },
    d: C { re: 1.0, im: 0.0 },
};

const INV_CAYLEY: Moebius = Moebius {
    a: C { re: 1.0, im: 0.0 },
    b: C { re: 0.0, im: -1.0 },
    c: C { re: 1.0, im: 0.0 },
    d: C { re: 0.0, im: 1.0 },
};

impl<E: InnerEvaluator> HerglotzEvaluator for WeylFromInner<E> {
    fn jet(&self, lambda: C) -> Result<Jet> {
        CAYLEY.compose(&self.inner.jet(lambda)?, lambda)
    }
    fn eval(&self, lambda: C) -> Result<C> {
        CAYLEY.apply_proj(&self.inner.eval_proj(lambda)).value(lambda)
    }
}

/// `B = (M − i)/(M + i)`; poles of `M` map to 1.
#[derive(Debug, Clone)]
pub struct InnerFromHerglotz<H> {
    pub weyl: H,
}

pub fn herglotz_to_inner<H: HerglotzEvaluator>(weyl: H) -> InnerFromHerglotz<H> {
    InnerFromHerglotz { weyl }
}

impl<H: HerglotzEvaluator> InnerEvaluator for InnerFromHerglotz<H> {
    fn eval_proj(&self, lambda: C) -> ProjectiveValue {
        match self.weyl.eval(lambda) {
            Ok(m) if m.re.is_finite() && m.im.is_finite() => INV_CAYLEY.apply_proj(&ProjectiveValue::finite(m)),
            _ => ProjectiveValue::finite(C::new(1.0, 0.0)),
        }
    }
    fn jet(&self, lambda: C) -> Result<Jet> {
        INV_CAYLEY.compose(&self.weyl.jet(lambda)?, lambda)
    }
    fn ln_one_minus_abs_sq(&self, lambda: C) -> f64 {
        // 1 − |B|² = 4 Im M/|M + i|²
        match self.weyl.eval(lambda) {
            Ok(m) if m.re.is_finite() && m.im.is_finite() => (4.0 * m.im).ln() - (m + I).norm_sqr().ln(),
            _ => f64::NEG_INFINITY,
        }
    }
}
