//! Indeterminate Hamburger moment problems through the Jacobi recurrence
//! `λPₙ = aₙPₙ₊₁ + bₙPₙ + aₙ₋₁Pₙ₋₁`.
//!
//! Series over `n` are cut at a finite section `0..=K`. The section is an
//! exact rational model in its own right: `det N ≡ 1`, the Pedersen shift,
//! the two curvature routes and the von Neumann quadrature all hold for it
//! identically, so truncation shows up only as distance from the limit.

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::geometry::SLSolution;
use crate::inner::{jet_div, HerglotzEvaluator, InnerEvaluator, Jet, ProjectiveValue};
use crate::numerics::quad::{integrate_pieces, QuadOptions};
use crate::numerics::roots::{bisect, real_roots};

const I: C = C { re: 0.0, im: 1.0 };
const ZERO: C = C { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiSpec {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub provenance: String,
    /// Set when `Σ 1/aₙ` still grows noticeably near the cap, a hint that
    /// the problem may be determinate.
    pub carleman_warning: Option<String>,
}

impl JacobiSpec {
    pub fn new(a: Vec<f64>, b: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Validation(format!("a has {} entries, b has {}", a.len(), b.len())));
        }
        if a.len() < 2 {
            return Err(Error::Validation("need at least two recurrence coefficients".into()));
        }
        if let Some(k) = a.iter().position(|x| !(*x > 0.0) || !x.is_finite()) {
            return Err(Error::Validation(format!("a[{k}] = {} is not positive", a[k])));
        }
        if let Some(k) = b.iter().position(|x| !x.is_finite()) {
            return Err(Error::Validation(format!("b[{k}] is not finite")));
        }
        let total: f64 = a.iter().map(|x| 1.0 / x).sum();
        let late: f64 = a[a.len() / 2..].iter().map(|x| 1.0 / x).sum();
        let carleman_warning = (late > 0.05 * total).then(|| {
            format!("sum of 1/a_n still growing at the cap ({:.1}% from the second half); may be determinate", 100.0 * late / total)
        });
        Ok(Self { a, b, provenance: provenance.into(), carleman_warning })
    }

    /// `aₙ = scale·(n + shift)^power`, `bₙ = b`, for `n < n_max`.
    pub fn power_rule(n_max: usize, power: f64, shift: f64, scale: f64, b: f64) -> Result<Self> {
        let a = (0..n_max).map(|n| scale * (n as f64 + shift).powf(power)).collect();
        Self::new(a, vec![b; n_max], format!("a_n = {scale}*(n+{shift})^{power}, b_n = {b}"))
    }

    pub fn n_max(&self) -> usize {
        self.a.len()
    }

    /// `ãₙ = aₙ₊₁`, `b̃ₙ = bₙ₊₁`.
    pub fn shifted(&self) -> Result<Self> {
        Self::new(self.a[1..].to_vec(), self.b[1..].to_vec(), format!("shift of [{}]", self.provenance))
    }
}

/// Where the series over `n` stop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// Section `0..=N_max−1`.
    Full,
    /// Section `0..=K`.
    Section(usize),
    /// Stop after five consecutive terms below `tol` times the running scale.
    Adaptive { tol: f64 },
}

impl Truncation {
    fn last_index(&self, spec: &JacobiSpec) -> Result<Option<usize>> {
        let cap = spec.n_max() - 1;
        match *self {
            Truncation::Full => Ok(Some(cap)),
            Truncation::Section(k) if k <= cap => Ok(Some(k)),
            Truncation::Section(k) => Err(Error::IndexBeyondCap { index: k, cap }),
            Truncation::Adaptive { .. } => Ok(None),
        }
    }

    /// The matching section of the shifted spec.
    fn shifted(&self) -> Self {
        match *self {
            Truncation::Section(k) => Truncation::Section(k.saturating_sub(1)),
            t => t,
        }
    }
}

/// `Pₙ` and `Qₙ` with up to three derivatives, `n = 0..=N_max`.
struct PolyTable {
    p: Vec<Jet>,
    q: Vec<Jet>,
}

fn poly_table(spec: &JacobiSpec, lambda: C) -> PolyTable {
    poly_table_to(spec, lambda, 3)
}

fn poly_table_to(spec: &JacobiSpec, lambda: C, order: usize) -> PolyTable {
    let n = spec.n_max();
    let mut p = vec![[ZERO; 4]; n + 1];
    let mut q = vec![[ZERO; 4]; n + 1];
    p[0][0] = C::new(1.0, 0.0);
    if n >= 1 {
        q[1][0] = C::new(1.0 / spec.a[0], 0.0);
    }
    // aₙX⁽ᵏ⁾ₙ₊₁ = (λ − bₙ)X⁽ᵏ⁾ₙ + kX⁽ᵏ⁻¹⁾ₙ − aₙ₋₁X⁽ᵏ⁾ₙ₋₁
    let step = |x: &mut Vec<Jet>, m: usize| {
        let prev = if m == 0 { [ZERO; 4] } else { x[m - 1] };
        let am1 = if m == 0 { 0.0 } else { spec.a[m - 1] };
        let mut next = [ZERO; 4];
        for k in 0..=order {
            let mut v = (lambda - spec.b[m]) * x[m][k] - am1 * prev[k];
            if k > 0 {
                v += k as f64 * x[m][k - 1];
            }
            next[k] = v / spec.a[m];
        }
        x[m + 1] = next;
    };
    for m in 0..n {
        step(&mut p, m);
        if m >= 1 {
            step(&mut q, m);
        }
    }
    PolyTable { p, q }
}

fn check_index(spec: &JacobiSpec, n: usize) -> Result<()> {
    if n > spec.n_max() {
        return Err(Error::IndexBeyondCap { index: n, cap: spec.n_max() });
    }
    Ok(())
}

/// `Pₙ(λ)`, `P₀ ≡ 1`.
pub fn poly_first(spec: &JacobiSpec, n: usize, lambda: C) -> Result<C> {
    check_index(spec, n)?;
    Ok(poly_table(spec, lambda).p[n][0])
}

/// `Qₙ(λ)`, `Q₀ ≡ 0`, `Q₁ = 1/a₀`.
pub fn poly_second(spec: &JacobiSpec, n: usize, lambda: C) -> Result<C> {
    check_index(spec, n)?;
    Ok(poly_table(spec, lambda).q[n][0])
}

/// `aₙ(PₙQₙ₊₁ − Pₙ₊₁Qₙ)`, identically 1.
pub fn wronskian(spec: &JacobiSpec, n: usize, lambda: C) -> Result<C> {
    check_index(spec, n + 1)?;
    let t = poly_table(spec, lambda);
    Ok(spec.a[n] * (t.p[n][0] * t.q[n + 1][0] - t.p[n + 1][0] * t.q[n][0]))
}

/// Entries of the Nevanlinna matrix with three derivatives each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryJets {
    pub a: Jet,
    pub b: Jet,
    pub c: Jet,
    pub d: Jet,
    pub truncation_n: usize,
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NevanlinnaMatrixValue {
    pub lambda: C,
    pub a_val: C,
    pub b_val: C,
    pub c_val: C,
    pub d_val: C,
    pub truncation_n: usize,
    pub tail_estimate: f64,
}

impl NevanlinnaMatrixValue {
    pub fn det(&self) -> C {
        self.a_val * self.d_val - self.b_val * self.c_val
    }
}

/// Picks the last index: fixed for sections, from the stopping rule otherwise.
fn stop_index(spec: &JacobiSpec, trunc: Truncation, term: impl Fn(usize) -> (f64, f64)) -> Result<usize> {
    if let Some(k) = trunc.last_index(spec)? {
        return Ok(k);
    }
    let Truncation::Adaptive { tol } = trunc else { unreachable!() };
    let cap = spec.n_max() - 1;
    let mut quiet = 0;
    let mut scale: f64 = 1.0;
    let mut last = 0.0;
    for n in 0..=cap {
        let (t, s) = term(n);
        scale = scale.max(s);
        last = t;
        if t < tol * scale {
            quiet += 1;
            if quiet == 5 {
                return Ok(n);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NoConvergence { cap: spec.n_max(), last })
}

/// `a = λΣQₙ(0)Qₙ`, `b = −1 + λΣQₙ(0)Pₙ`, `c = 1 + λΣPₙ(0)Qₙ`, `d = λΣPₙ(0)Pₙ`.
pub fn nevanlinna_jets(spec: &JacobiSpec, lambda: C, trunc: Truncation) -> Result<EntryJets> {
    entry_jets(spec, &poly_table_to(spec, ZERO, 0), lambda, trunc, 3)
}

/// Entries with derivatives through `order`; `t0` is the table at 0.
fn entry_jets(spec: &JacobiSpec, t0: &PolyTable, lambda: C, trunc: Truncation, order: usize) -> Result<EntryJets> {
    let t = poly_table_to(spec, lambda, order);
    let terms = |n: usize| -> [Jet; 4] {
        let (p0, q0) = (t0.p[n][0], t0.q[n][0]);
        [t.q[n].map(|z| q0 * z), t.p[n].map(|z| q0 * z), t.q[n].map(|z| p0 * z), t.p[n].map(|z| p0 * z)]
    };
    let mag = |n: usize| -> f64 { terms(n).iter().map(|j| j[0].norm()).fold(0.0, f64::max) * lambda.norm() };
    // Running sums for the adaptive scale.
    let mut partial = vec![0.0f64; spec.n_max()];
    let mut sums = [ZERO; 4];
    for (n, slot) in partial.iter_mut().enumerate() {
        for (s, j) in sums.iter_mut().zip(terms(n)) {
            *s += j[0];
        }
        *slot = sums.iter().map(|z| z.norm()).fold(0.0, f64::max) * lambda.norm();
    }
    let k = stop_index(spec, trunc, |n| (mag(n), partial[n]))?;
    let mut s = [[ZERO; 4]; 4];
    for n in 0..=k {
        for (acc, j) in s.iter_mut().zip(terms(n)) {
            for i in 0..=order {
                acc[i] += j[i];
            }
        }
    }
    // (λS)⁽ⁱ⁾ = λS⁽ⁱ⁾ + iS⁽ⁱ⁻¹⁾
    let times_lambda = |s: &Jet| -> Jet {
        let mut out = [ZERO; 4];
        for i in 0..4 {
            out[i] = lambda * s[i] + if i > 0 { i as f64 * s[i - 1] } else { ZERO };
        }
        out
    };
    let mut a = times_lambda(&s[0]);
    let mut b = times_lambda(&s[1]);
    let mut c = times_lambda(&s[2]);
    let d = times_lambda(&s[3]);
    b[0] -= 1.0;
    c[0] += 1.0;
    if lambda == ZERO {
        a[0] = ZERO;
    }
    let tail = (k.saturating_sub(4)..=k).map(mag).sum();
    Ok(EntryJets { a, b, c, d, truncation_n: k, tail_estimate: tail })
}

pub fn nevanlinna_entries(spec: &JacobiSpec, lambda: C, trunc: Truncation) -> Result<NevanlinnaMatrixValue> {
    let j = nevanlinna_jets(spec, lambda, trunc)?;
    Ok(NevanlinnaMatrixValue {
        lambda,
        a_val: j.a[0],
        b_val: j.b[0],
        c_val: j.c[0],
        d_val: j.d[0],
        truncation_n: j.truncation_n,
        tail_estimate: j.tail_estimate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PNorm {
    pub value: f64,
    pub truncation_n: usize,
    pub tail_estimate: f64,
}

/// `P(λ) = (Σ|Pₙ(λ)|²)^{1/2}`.
pub fn p_norm(spec: &JacobiSpec, lambda: C, trunc: Truncation) -> Result<PNorm> {
    let t = poly_table(spec, lambda);
    let sq: Vec<f64> = t.p.iter().map(|j| j[0].norm_sqr()).collect();
    let mut run = 0.0;
    let running: Vec<f64> = sq.iter().map(|x| {
        run += x;
        run
    }).collect();
    let k = stop_index(spec, trunc, |n| (sq[n], running[n]))?;
    let tail = sq[k.saturating_sub(4)..=k].iter().sum();
    Ok(PNorm { value: running[k].sqrt(), truncation_n: k, tail_estimate: tail })
}

/// `T_F(r) = (1/π)∫₀^π ln P(re^{iφ}) dφ − ln P(0)`.
pub fn tf_moment(spec: &JacobiSpec, r: f64, trunc: Truncation) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain("r must be nonnegative".into()));
    }
    let p0 = p_norm(spec, ZERO, trunc)?.value.ln();
    if r == 0.0 {
        return Ok(0.0);
    }
    let mut err = None;
    let q = integrate_pieces(
        |phi| match p_norm(spec, C::from_polar(r, phi), trunc) {
            Ok(p) => p.value.ln(),
            Err(e) => {
                err = Some(e);
                0.0
            }
        },
        0.0,
        PI,
        16,
        &QuadOptions::tol(1e-11, 1e-11),
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(q?.value / PI - p0)
}

/// Boundary parameter `t` of `b + td`; `Infinity` selects `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TParam {
    Finite(C),
    Infinity,
}

impl TParam {
    pub fn real(t: f64) -> Self {
        TParam::Finite(C::new(t, 0.0))
    }

    fn real_value(&self) -> Result<Option<f64>> {
        match self {
            TParam::Infinity => Ok(None),
            TParam::Finite(t) if t.im == 0.0 => Ok(Some(t.re)),
            TParam::Finite(_) => Err(Error::Validation("von Neumann spectra need real t".into())),
        }
    }
}

fn denominator_jet(j: &EntryJets, t: TParam) -> Jet {
    match t {
        TParam::Infinity => j.d,
        TParam::Finite(t) => [0, 1, 2, 3].map(|i| j.b[i] + t * j.d[i]),
    }
}

fn numerator_val(j: &EntryJets, t: TParam) -> C {
    match t {
        TParam::Infinity => j.c[0],
        TParam::Finite(t) => j.a[0] + t * j.c[0],
    }
}

/// Real zeros of `b + td` (of `d` for `t = ∞`) in the window. Scanned in
/// `s = sgn(x)√|x|`, which evens out the growing gaps between eigenvalues.
pub fn von_neumann_spectrum(spec: &JacobiSpec, t: TParam, window: (f64, f64), trunc: Truncation) -> Result<Vec<f64>> {
    t.real_value()?;
    let t0 = poly_table_to(spec, ZERO, 0);
    let f = |x: f64| -> f64 {
        match entry_jets(spec, &t0, C::new(x, 0.0), trunc, 0) {
            Ok(j) => denominator_jet(&j, t)[0].re,
            Err(_) => f64::NAN,
        }
    };
    let to_s = |x: f64| x.signum() * x.abs().sqrt();
    let (s0, s1) = (to_s(window.0), to_s(window.1));
    let step = (s1 - s0) / 800.0;
    let roots = real_roots(|s| f(s * s.abs()), s0, s1, step, 1e-6 * step)?;
    Ok(roots
        .into_iter()
        .map(|s| {
            let (lo, hi) = ((s - 2e-6 * step) * (s - 2e-6 * step).abs(), (s + 2e-6 * step) * (s + 2e-6 * step).abs());
            if f(lo) * f(hi) < 0.0 {
                bisect(f, lo, hi, 1e-13 * (1.0 + s * s))
            } else {
                s * s.abs()
            }
        })
        .filter(|x| *x > window.0 && *x < window.1)
        .collect())
}

/// `I_t(λ) = −(a + tc)/(b + td)`, `−c/d` at `t = ∞`.
pub fn resolvent_i(spec: &JacobiSpec, t: TParam, lambda: C, trunc: Truncation) -> Result<C> {
    let j = nevanlinna_jets(spec, lambda, trunc)?;
    let den = denominator_jet(&j, t)[0];
    let scale = match t {
        TParam::Infinity => j.b[0].norm() + j.d[0].norm(),
        TParam::Finite(t) => j.b[0].norm() + t.norm() * j.d[0].norm(),
    };
    if den.norm() < 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::SpectralPoint { at: lambda });
    }
    Ok(-numerator_val(&j, t) / den)
}

/// Atoms `(x, mass)` of the von Neumann measure: `I_t(λ) = Σ mass/(x − λ)`,
/// `mass = (a + tc)(x)/(b′ + td′)(x)`. Since `ad − bc ≡ 1` and `b = −td` at
/// the atom, the numerator is `1/d(x)` (or `−1/b(x)` at `t = ∞`); using that
/// avoids the cancellation that swamps the tiny far-out masses.
pub fn von_neumann_measure(spec: &JacobiSpec, t: TParam, window: (f64, f64), trunc: Truncation) -> Result<Vec<(f64, f64)>> {
    von_neumann_spectrum(spec, t, window, trunc)?
        .into_iter()
        .map(|x| {
            let j = nevanlinna_jets(spec, C::new(x, 0.0), trunc)?;
            let num = match t {
                TParam::Infinity => -1.0 / j.b[0],
                TParam::Finite(_) => 1.0 / j.d[0],
            };
            Ok((x, (num / denominator_jet(&j, t)[1]).re))
        })
        .collect()
}

/// Gershgorin bound on the spectrum of the section `0..=K`.
pub fn spectral_radius_bound(spec: &JacobiSpec, k: usize) -> f64 {
    (0..=k.min(spec.n_max() - 1))
        .map(|n| spec.b[n].abs() + spec.a[n] + if n > 0 { spec.a[n - 1] } else { 0.0 })
        .fold(0.0, f64::max)
}

/// A symmetric window holding every atom of the section: twice the Gershgorin bound.
pub fn default_window(spec: &JacobiSpec, trunc: Truncation) -> Result<(f64, f64)> {
    let k = trunc.last_index(spec)?.unwrap_or(spec.n_max() - 1);
    let r = 2.0 * spectral_radius_bound(spec, k) + 1.0;
    Ok((-r, r))
}

/// `sᵢ = ⟨Jⁱe₀, e₀⟩`, exact from the tridiagonal action.
pub fn moments_from_jacobi(spec: &JacobiSpec, i: usize) -> Result<f64> {
    let cap = 2 * spec.n_max() - 2;
    if i > cap {
        return Err(Error::IndexBeyondCap { index: i, cap });
    }
    let power = |m: usize| -> Vec<f64> {
        let mut v = vec![0.0; m + 1];
        v[0] = 1.0;
        for step in 0..m {
            let mut w = vec![0.0; m + 1];
            for n in 0..=step {
                w[n] += spec.b[n] * v[n];
                w[n + 1] += spec.a[n] * v[n];
                if n > 0 {
                    w[n - 1] += spec.a[n - 1] * v[n];
                }
            }
            v = w;
        }
        v
    };
    let (u, v) = (power(i.div_ceil(2)), power(i / 2));
    Ok(u.iter().zip(&v).map(|(x, y)| x * y).sum())
}

/// `ω(u) = [P²ΣPₙ′² − (ΣPₙPₙ′)²]/P⁴` with `P² = ΣPₙ²`.
pub fn curvature_from_polys(spec: &JacobiSpec, u: f64, trunc: Truncation) -> Result<f64> {
    let t = poly_table(spec, C::new(u, 0.0));
    let pn: Vec<f64> = t.p.iter().map(|j| j[0].re).collect();
    let dn: Vec<f64> = t.p.iter().map(|j| j[1].re).collect();
    let mut run = 0.0;
    let running: Vec<f64> = pn.iter().zip(&dn).map(|(p, d)| {
        run += p * p + d * d;
        run
    }).collect();
    let k = stop_index(spec, trunc, |n| (pn[n] * pn[n] + dn[n] * dn[n], running[n]))?;
    let (mut p2, mut d2, mut pd) = (0.0, 0.0, 0.0);
    for n in 0..=k {
        p2 += pn[n] * pn[n];
        d2 += dn[n] * dn[n];
        pd += pn[n] * dn[n];
    }
    Ok((p2 * d2 - pd * pd) / (p2 * p2))
}

/// Upper bound `ΣPₙ′²/P²` on the curvature.
pub fn curvature_bound_from_polys(spec: &JacobiSpec, u: f64, trunc: Truncation) -> Result<f64> {
    let k = trunc.last_index(spec)?.unwrap_or(spec.n_max() - 1);
    let t = poly_table(spec, C::new(u, 0.0));
    let p2: f64 = t.p[..=k].iter().map(|j| j[0].re * j[0].re).sum();
    let d2: f64 = t.p[..=k].iter().map(|j| j[1].re * j[1].re).sum();
    Ok(d2 / p2)
}

/// `B = (b − id)/(b + id)`, the inner function of the moment problem.
#[derive(Debug, Clone)]
pub struct JacobiInner {
    pub spec: JacobiSpec,
    pub trunc: Truncation,
}

impl InnerEvaluator for JacobiInner {
    fn eval_proj(&self, lambda: C) -> ProjectiveValue {
        match nevanlinna_jets(&self.spec, lambda, self.trunc) {
            Ok(j) => {
                let (n, d) = (j.b[0] - I * j.d[0], j.b[0] + I * j.d[0]);
                let s = n.norm().max(d.norm());
                if s > 0.0 && s.is_finite() {
                    ProjectiveValue { numerator: n / s, denominator: d / s, ln_scale: 0.0 }
                } else {
                    ProjectiveValue { numerator: n, denominator: d, ln_scale: 0.0 }
                }
            }
            Err(_) => ProjectiveValue { numerator: C::new(f64::NAN, 0.0), denominator: C::new(1.0, 0.0), ln_scale: 0.0 },
        }
    }

    fn jet(&self, lambda: C) -> Result<Jet> {
        let j = nevanlinna_jets(&self.spec, lambda, self.trunc)?;
        let n = [0, 1, 2, 3].map(|i| j.b[i] - I * j.d[i]);
        let d = [0, 1, 2, 3].map(|i| j.b[i] + I * j.d[i]);
        jet_div(&n, &d, lambda)
    }

    fn ln_one_minus_abs_sq(&self, lambda: C) -> f64 {
        // 1 − |B|² = 4 Im(b·conj d)/|b + id|²
        match nevanlinna_jets(&self.spec, lambda, self.trunc) {
            Ok(j) => (4.0 * (j.b[0] * j.d[0].conj()).im).ln() - (j.b[0] + I * j.d[0]).norm_sqr().ln(),
            Err(_) => f64::NAN,
        }
    }
}

/// `M = b/d`.
#[derive(Debug, Clone)]
pub struct JacobiWeyl {
    pub spec: JacobiSpec,
    pub trunc: Truncation,
}

impl HerglotzEvaluator for JacobiWeyl {
    fn jet(&self, lambda: C) -> Result<Jet> {
        let j = nevanlinna_jets(&self.spec, lambda, self.trunc)?;
        jet_div(&j.b, &j.d, lambda)
    }
}

#[derive(Debug, Clone)]
pub struct SturmReport {
    pub solution: SLSolution,
    /// `W = d b′ − d′ b` on the grid.
    pub w_values: Vec<f64>,
    /// `max |yᵢ″ + 3ωyᵢ|` over interior nodes by second differences, relative to `max (|yᵢ″| + 3ω|yᵢ|)`.
    pub residual: f64,
}

/// `y₁ = b/√W`, `y₂ = d/√W` solve `y″ + 3ωy = 0`.
pub fn sturm_solutions(spec: &JacobiSpec, grid: &[f64], trunc: Truncation) -> Result<SturmReport> {
    let mut y1 = Vec::with_capacity(grid.len());
    let mut y2 = Vec::with_capacity(grid.len());
    let mut wr = Vec::with_capacity(grid.len());
    let mut ws = Vec::with_capacity(grid.len());
    for &u in grid {
        let j = nevanlinna_jets(spec, C::new(u, 0.0), trunc)?;
        let [b, b1, b2, _] = j.b.map(|z| z.re);
        let [d, d1, d2, _] = j.d.map(|z| z.re);
        let w = d * b1 - d1 * b;
        if !(w > 0.0) {
            return Err(Error::WronskianSign { at: u, value: w });
        }
        let w1 = d * b2 - d2 * b;
        let sw = w.sqrt();
        let (v1, v2) = (b / sw, d / sw);
        let dv1 = (b1 - 0.5 * b * w1 / w) / sw;
        let dv2 = (d1 - 0.5 * d * w1 / w) / sw;
        y1.push(v1);
        y2.push(v2);
        wr.push(v1 * dv2 - dv1 * v2);
        ws.push(w);
    }
    let mean = wr.iter().sum::<f64>() / wr.len().max(1) as f64;
    let drift = wr.iter().map(|x| ((x - mean) / mean).abs()).fold(0.0, f64::max);
    // Relative to the size of the two terms that cancel.
    let mut residual: f64 = 0.0;
    let mut scale: f64 = f64::MIN_POSITIVE;
    for k in 1..grid.len().saturating_sub(1) {
        let (h0, h1) = (grid[k] - grid[k - 1], grid[k + 1] - grid[k]);
        let om = curvature_from_polys(spec, grid[k], trunc)?;
        for y in [&y1, &y2] {
            let second = 2.0 * (h0 * y[k + 1] - (h0 + h1) * y[k] + h1 * y[k - 1]) / (h0 * h1 * (h0 + h1));
            residual = residual.max((second + 3.0 * om * y[k]).abs());
            scale = scale.max(second.abs() + 3.0 * om * y[k].abs());
        }
    }
    let residual = residual / scale;
    Ok(SturmReport {
        solution: SLSolution { grid: grid.to_vec(), y1_values: y1, y2_values: y2, wronskian: mean, wronskian_drift: drift },
        w_values: ws,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PedersenCheck {
    pub a_val: C,
    /// `d̃(λ)` of the shifted problem.
    pub d_shift: C,
    /// `|a − d̃/a₀²|`, relative.
    pub mismatch: f64,
    pub c_val: C,
    /// `−(b₀/a₀²)d̃ − b̃`.
    pub c_predicted: C,
    pub c_mismatch: f64,
}

fn rel(x: C, y: C) -> f64 {
    let s = x.norm().max(y.norm());
    if s == 0.0 {
        0.0
    } else {
        (x - y).norm() / s
    }
}

/// `a(λ) = d̃(λ)/a₀²` and `c(λ) = −(b₀/a₀²)d̃(λ) − b̃(λ)`.
pub fn shift_and_pedersen(spec: &JacobiSpec, lambda: C, trunc: Truncation) -> Result<PedersenCheck> {
    let sh = spec.shifted()?;
    let n = nevanlinna_entries(spec, lambda, trunc)?;
    let m = nevanlinna_entries(&sh, lambda, trunc.shifted())?;
    let a02 = spec.a[0] * spec.a[0];
    let c_pred = -(spec.b[0] / a02) * m.d_val - m.b_val;
    Ok(PedersenCheck {
        a_val: n.a_val,
        d_shift: m.d_val,
        mismatch: rel(n.a_val, m.d_val / a02),
        c_val: n.c_val,
        c_predicted: c_pred,
        c_mismatch: rel(n.c_val, c_pred),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares(n: usize) -> JacobiSpec {
        JacobiSpec::power_rule(n, 2.0, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn first_kind_examples() {
        let s = squares(20);
        let z = C::new(0.7, -0.3);
        assert_eq!(poly_first(&s, 0, z).unwrap(), C::new(1.0, 0.0));
        assert!((poly_first(&s, 1, z).unwrap() - z).norm() < 1e-15);
        assert!((poly_first(&s, 2, z).unwrap() - (z * z - 1.0) / 4.0).norm() < 1e-15);
        assert!(matches!(poly_first(&s, 21, z), Err(Error::IndexBeyondCap { .. })));
    }

    #[test]
    fn second_kind_examples() {
        let s = squares(20);
        let z = C::new(2.0, 1.0);
        assert_eq!(poly_second(&s, 0, z).unwrap(), ZERO);
        assert_eq!(poly_second(&s, 1, z).unwrap(), C::new(1.0, 0.0));
        assert!((wronskian(&s, 3, z).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn entries_at_zero_and_det() {
        let s = squares(60);
        let n0 = nevanlinna_entries(&s, ZERO, Truncation::Full).unwrap();
        assert_eq!((n0.a_val, n0.b_val, n0.c_val, n0.d_val), (ZERO, C::new(-1.0, 0.0), C::new(1.0, 0.0), ZERO));
        let n = nevanlinna_entries(&s, C::new(0.0, 2.0), Truncation::Full).unwrap();
        assert!((n.det() - 1.0).norm() < 1e-6);
        let m = n.b_val / n.d_val;
        assert!(nevanlinna_entries(&s, I, Truncation::Full).map(|n| (n.b_val / n.d_val).im).unwrap() > 0.0 || m.im > 0.0);
    }

    #[test]
    fn adaptive_stops_on_geometric_growth() {
        let s = JacobiSpec::power_rule(80, 1.0, 0.0, 1.0, 0.0).map(|_| ()).ok();
        assert!(s.is_none(), "a_0 = 0 must be rejected");
        let a: Vec<f64> = (0..80).map(|n| 2f64.powi(n)).collect();
        let g = JacobiSpec::new(a, vec![0.0; 80], "geometric").unwrap();
        let n = nevanlinna_entries(&g, C::new(1.0, 1.0), Truncation::Adaptive { tol: 1e-14 }).unwrap();
        assert!(n.truncation_n < 79);
        assert!((n.det() - 1.0).norm() < 1e-10);
        let slow = squares(10);
        assert!(matches!(
            nevanlinna_entries(&slow, C::new(1.0, 1.0), Truncation::Adaptive { tol: 1e-14 }),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn p_norm_examples() {
        let s = squares(40);
        assert!(p_norm(&s, C::new(3.0, 2.0), Truncation::Full).unwrap().value >= 1.0);
        let a = p_norm(&s, I, Truncation::Full).unwrap().value;
        let b = p_norm(&s, -I, Truncation::Full).unwrap().value;
        assert!((a - b).abs() < 1e-10 * a);
        let odd = poly_first(&s, 3, ZERO).unwrap();
        assert_eq!(odd, ZERO);
    }

    #[test]
    fn moments_examples() {
        let s = squares(10);
        assert_eq!(moments_from_jacobi(&s, 0).unwrap(), 1.0);
        assert_eq!(moments_from_jacobi(&s, 1).unwrap(), 0.0);
        assert_eq!(moments_from_jacobi(&s, 2).unwrap(), 1.0);
        let t = JacobiSpec::new(vec![2.0, 3.0], vec![0.5, -1.0], "two").unwrap();
        assert_eq!(moments_from_jacobi(&t, 1).unwrap(), 0.5);
        assert_eq!(moments_from_jacobi(&t, 2).unwrap(), 4.25);
        assert!(matches!(moments_from_jacobi(&t, 3), Err(Error::IndexBeyondCap { .. })));
    }

    #[test]
    fn resolvent_at_zero() {
        let s = squares(30);
        for t in [0.0, 1.0, -2.5] {
            assert!((resolvent_i(&s, TParam::real(t), ZERO, Truncation::Full).unwrap() - t).norm() < 1e-15);
        }
        for t in [TParam::real(0.0), TParam::real(1.0), TParam::Infinity] {
            assert!(resolvent_i(&s, t, I, Truncation::Full).unwrap().im > 0.0);
        }
    }

    #[test]
    fn d_has_one_zero_near_origin() {
        let s = squares(30);
        let z = von_neumann_spectrum(&s, TParam::Infinity, (-0.5, 0.5), Truncation::Full).unwrap();
        assert_eq!(z.len(), 1);
        assert!(z[0].abs() < 1e-12);
    }

    #[test]
    fn pedersen_examples() {
        let s = squares(40);
        let p = shift_and_pedersen(&s, C::new(1.0, 1.0), Truncation::Full).unwrap();
        assert!(p.mismatch < 1e-8);
        let z = shift_and_pedersen(&s, ZERO, Truncation::Full).unwrap();
        assert_eq!((z.a_val, z.d_shift), (ZERO, ZERO));
        assert!(shift_and_pedersen(&s, C::new(0.0, 2.0), Truncation::Full).unwrap().c_mismatch < 1e-8);
    }

    #[test]
    fn carleman_warning() {
        assert!(squares(60).carleman_warning.is_none());
        let lin = JacobiSpec::power_rule(60, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert!(lin.carleman_warning.is_some());
    }
}
