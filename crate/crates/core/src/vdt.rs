//! Value distribution: spectra of extensions, counting and proximity
//! functions, the height `h_T`, the bundle characteristic `T_F`, defects.

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::geometry::{chi, chi_with, omega};
use crate::inner::{InnerEvaluator, InnerFunctionSpec, ProjectiveValue};
use crate::numerics::quad::{integrate_breaks, integrate_log_weight, integrate_pieces, QuadOptions};
use crate::numerics::roots::bisect;
use crate::numerics::fit_line;

/// A point of ℂP¹ selecting the extension `T_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Finite(C),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcClass {
    SelfAdjoint,
    StrictlyDissipative,
    StrictlyAccumulative,
}

impl BoundaryCondition {
    pub fn real(x: f64) -> Self {
        Self::Finite(C::new(x, 0.0))
    }

    pub fn class(&self) -> BcClass {
        match self {
            Self::Infinity => BcClass::StrictlyAccumulative,
            Self::Finite(c) => {
                let m = c.norm();
                if (m - 1.0).abs() <= 1e-12 {
                    BcClass::SelfAdjoint
                } else if m < 1.0 {
                    BcClass::StrictlyDissipative
                } else {
                    BcClass::StrictlyAccumulative
                }
            }
        }
    }

    pub fn as_option(&self) -> Option<C> {
        match self {
            Self::Finite(c) => Some(*c),
            Self::Infinity => None,
        }
    }
}

/// Axis-aligned search rectangle; a zero-height window is a real interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Window {
    pub fn real(a: f64, b: f64) -> Self {
        Self { re: (a, b), im: (0.0, 0.0) }
    }

    pub fn rect(re: (f64, f64), im: (f64, f64)) -> Self {
        Self { re, im }
    }

    pub fn square(r: f64) -> Self {
        Self { re: (-r, r), im: (-r, r) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub location: C,
    pub multiplicity: u32,
}

/// Roots of `B(λ) = c` in the window.
///
/// Self-adjoint conditions are solved on ℝ by inverting the monotone phase;
/// the others by argument-principle subdivision in the half-plane that holds them.
pub fn spectrum(spec: &InnerFunctionSpec, bc: BoundaryCondition, window: Window) -> Result<Vec<Root>> {
    if bc.class() == BcClass::SelfAdjoint {
        let c = bc.as_option().unwrap();
        if !(window.im.0 <= 0.0 && 0.0 <= window.im.1) {
            return Ok(vec![]);
        }
        let (a, b) = window.re;
        let alpha = c.arg();
        let (ta, tb) = (spec.theta(a), spec.theta(b));
        let k0 = ((ta - alpha) / (2.0 * PI)).floor() as i64 + 1;
        let k1 = ((tb - alpha) / (2.0 * PI)).ceil() as i64 - 1;
        let mut out = Vec::new();
        for k in k0..=k1 {
            let target = alpha + 2.0 * PI * k as f64;
            let u = bisect(|u| spec.theta(u) - target, a, b, 1e-14 * (1.0 + a.abs().max(b.abs())));
            if u > a && u < b {
                out.push(Root { location: C::new(u, 0.0), multiplicity: 1 });
            }
        }
        return Ok(out);
    }
    spectrum_of(spec, bc, window)
}

/// Generic version for any inner-function evaluator.
pub fn spectrum_of<E: InnerEvaluator + ?Sized>(b: &E, bc: BoundaryCondition, window: Window) -> Result<Vec<Root>> {
    match bc.class() {
        BcClass::SelfAdjoint => {
            let c = bc.as_option().unwrap();
            if !(window.im.0 <= 0.0 && 0.0 <= window.im.1) {
                return Ok(vec![]);
            }
            real_roots_unimodular(b, c, window.re.0, window.re.1)
        }
        BcClass::StrictlyDissipative => {
            let c = bc.as_option().unwrap();
            let lo = window.im.0.max(0.0);
            if !(window.im.1 > lo) {
                return Ok(vec![]);
            }
            let rect = Rect { x0: window.re.0, x1: window.re.1, y0: lo, y1: window.im.1 };
            upper_roots(b, c, rect)
        }
        BcClass::StrictlyAccumulative => {
            // B(λ) = c in ℂ₋ iff B(λ̄) = 1/c̄ in ℂ₊.
            let c = match bc {
                BoundaryCondition::Infinity => C::new(0.0, 0.0),
                BoundaryCondition::Finite(c) => 1.0 / c.conj(),
            };
            let lo = (-window.im.1).max(0.0);
            let hi = -window.im.0;
            if !(hi > lo) {
                return Ok(vec![]);
            }
            let rect = Rect { x0: window.re.0, x1: window.re.1, y0: lo, y1: hi };
            Ok(upper_roots(b, c, rect)?
                .into_iter()
                .map(|r| Root { location: r.location.conj(), multiplicity: r.multiplicity })
                .collect())
        }
    }
}

/// Real roots of `B(u) = c`, |c| = 1, stepping so the phase moves less than π/2.
fn real_roots_unimodular<E: InnerEvaluator + ?Sized>(b: &E, c: C, a: f64, bnd: f64) -> Result<Vec<Root>> {
    let g = |u: f64| -> Result<C> { Ok(b.value(C::new(u, 0.0))? / c) };
    let mut out = Vec::new();
    let mut u = a;
    let mut w = g(u)?;
    while u < bnd {
        let tp = b.phase_jet(u)?[0].abs().max(1e-3);
        let mut h = (0.25 / tp).min(bnd - u);
        let (u1, w1) = loop {
            let u1 = (u + h).min(bnd);
            let w1 = g(u1)?;
            if (w1 / w).arg().abs() < 0.5 * PI || h < 1e-12 {
                break (u1, w1);
            }
            h *= 0.5;
        };
        if w1.im == 0.0 && w1.re > 0.0 && u1 < bnd {
            out.push(Root { location: C::new(u1, 0.0), multiplicity: 1 });
        } else if (w.im > 0.0) != (w1.im > 0.0) && w.im != 0.0 && w1.im != 0.0 && (w.re + w1.re) > 0.0 {
            let x = bisect(|x| g(x).map(|z| z.im).unwrap_or(f64::NAN), u, u1, 1e-14 * (1.0 + u1.abs()));
            out.push(Root { location: C::new(x, 0.0), multiplicity: 1 });
        }
        u = u1;
        w = w1;
    }
    out.retain(|r| r.location.re > a && r.location.re < bnd);
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Rect {
    fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }
    fn center(&self) -> C {
        C::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }
    fn contains(&self, z: C, slack: f64) -> bool {
        z.re >= self.x0 - slack && z.re <= self.x1 + slack && z.im >= self.y0 - slack && z.im <= self.y1 + slack
    }
}

/// Argument of `B(λ) − c`, robust when `B` under- or overflows.
fn arg_of(pv: &ProjectiveValue, c: C) -> Option<f64> {
    if c == C::new(0.0, 0.0) {
        if pv.numerator == C::new(0.0, 0.0) || pv.is_infinite() {
            return None;
        }
        return Some((pv.numerator / pv.denominator).arg());
    }
    let (n, d) = pv.folded();
    let z = n - c * d;
    if z == C::new(0.0, 0.0) || !z.re.is_finite() || !z.im.is_finite() || pv.is_infinite() {
        return None;
    }
    Some(z.arg() - d.arg())
}

fn wrap(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    } else if y <= -PI {
        y += 2.0 * PI;
    }
    y
}

/// Argument-principle machinery over a closure giving `arg F(λ)` and the
/// Newton step `F/F′`; either may decline with `None`.
struct Winder<A, S> {
    arg: A,
    step: S,
    min_len: f64,
}

impl<A: Fn(C) -> Option<f64>, S: Fn(C) -> Option<C>> Winder<A, S> {
    fn arg(&self, z: C) -> Result<f64> {
        (self.arg)(z).ok_or(Error::WindowOnPole { near: z })
    }

    /// Accumulated change of argument along the segment `p → q`.
    fn segment(&self, p: C, q: C, ap: f64, aq: f64, depth: u32) -> Result<f64> {
        let m = 0.5 * (p + q);
        let am = self.arg(m)?;
        let d1 = wrap(am - ap);
        let d2 = wrap(aq - am);
        if d1.abs() < 0.25 * PI && d2.abs() < 0.25 * PI && (d1 + d2 - wrap(aq - ap)).abs() < 1e-9 {
            return Ok(d1 + d2);
        }
        if (q - p).norm() < self.min_len || depth > 60 {
            return Err(Error::WindowOnPole { near: m });
        }
        Ok(self.segment(p, m, ap, am, depth + 1)? + self.segment(m, q, am, aq, depth + 1)?)
    }

    fn count(&self, r: &Rect) -> Result<i64> {
        let corners = [C::new(r.x0, r.y0), C::new(r.x1, r.y0), C::new(r.x1, r.y1), C::new(r.x0, r.y1)];
        let args = corners.iter().map(|&z| self.arg(z)).collect::<Result<Vec<_>>>()?;
        let mut total = 0.0;
        for k in 0..4 {
            let j = (k + 1) % 4;
            // Long edges are pre-split so phase aliasing cannot hide a turn.
            let len = (corners[j] - corners[k]).norm();
            let pieces = (len / (0.05 * r.diameter()).max(1e-300)).ceil().clamp(1.0, 64.0) as usize;
            let mut p = corners[k];
            let mut ap = args[k];
            for s in 1..=pieces {
                let q = if s == pieces { corners[j] } else { corners[k] + (corners[j] - corners[k]) * (s as f64 / pieces as f64) };
                let aq = if s == pieces { args[j] } else { self.arg(q)? };
                total += self.segment(p, q, ap, aq, 0)?;
                p = q;
                ap = aq;
            }
        }
        Ok((total / (2.0 * PI)).round() as i64)
    }

    fn newton(&self, z0: C) -> Option<C> {
        let mut z = z0;
        for _ in 0..80 {
            let step = (self.step)(z)?;
            z -= step;
            if !(z.re.is_finite() && z.im.is_finite()) {
                return None;
            }
            if step.norm() <= 1e-12 * (1.0 + z.norm()) {
                return Some(z);
            }
        }
        None
    }

    fn roots(&self, window: Rect) -> Result<Vec<Root>> {
        let mut out = Vec::new();
        let mut stack = vec![(window, self.count(&window)?)];
        let tiny = 1e-7 * window.diameter();
        while let Some((r, n)) = stack.pop() {
            if n <= 0 {
                continue;
            }
            if n == 1 && r.diameter() < 0.25 * window.diameter().min(8.0) {
                if let Some(z) = self.newton(r.center()) {
                    if r.contains(z, 1e-12 * (1.0 + z.norm())) {
                        out.push(Root { location: z, multiplicity: 1 });
                        continue;
                    }
                }
            }
            if r.diameter() < tiny {
                let z = self.newton(r.center()).unwrap_or(r.center());
                out.push(Root { location: z, multiplicity: n as u32 });
                continue;
            }
            // Slightly off-centre cuts make boundary hits on symmetric data unlikely;
            // if a cut passes through a root, try another fraction.
            let mut done = false;
            for frac in [0.5 + 1e-3 * PI, 0.5 - 2e-3 * PI, 0.41, 0.59] {
                let xm = r.x0 + frac * (r.x1 - r.x0);
                let ym = r.y0 + frac * (r.y1 - r.y0);
                let quads = [
                    Rect { x0: r.x0, x1: xm, y0: r.y0, y1: ym },
                    Rect { x0: xm, x1: r.x1, y0: r.y0, y1: ym },
                    Rect { x0: r.x0, x1: xm, y0: ym, y1: r.y1 },
                    Rect { x0: xm, x1: r.x1, y0: ym, y1: r.y1 },
                ];
                let counts: Result<Vec<i64>> = quads.iter().map(|q| self.count(q)).collect();
                if let Ok(counts) = counts {
                    for (q, k) in quads.into_iter().zip(counts) {
                        stack.push((q, k));
                    }
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::WindowOnPole { near: r.center() });
            }
        }
        out.sort_by(|a, b| a.location.re.total_cmp(&b.location.re).then(a.location.im.total_cmp(&b.location.im)));
        Ok(out)
    }
}

fn upper_roots<E: InnerEvaluator + ?Sized>(b: &E, c: C, window: Rect) -> Result<Vec<Root>> {
    let w = Winder {
        arg: |z| arg_of(&b.eval_proj(z), c),
        step: |z| {
            let j = b.jet(z).ok()?;
            (j[1] != C::new(0.0, 0.0)).then(|| (j[0] - c) / j[1])
        },
        min_len: 1e-9 * window.diameter(),
    };
    w.roots(window)
}

/// Zeros of a holomorphic function in a rectangle; `f` returns `(F, F′)`.
pub fn analytic_zeros<F: Fn(C) -> Result<(C, C)>>(f: F, window: Window) -> Result<Vec<Root>> {
    let rect = Rect { x0: window.re.0, x1: window.re.1, y0: window.im.0, y1: window.im.1 };
    if !(rect.x1 > rect.x0 && rect.y1 > rect.y0) {
        return Err(Error::Validation("window must have positive width and height".into()));
    }
    let w = Winder {
        arg: |z| match f(z) {
            Ok((v, _)) if v != C::new(0.0, 0.0) && v.re.is_finite() && v.im.is_finite() => Some(v.arg()),
            _ => None,
        },
        step: |z| {
            let (v, d) = f(z).ok()?;
            (d != C::new(0.0, 0.0)).then(|| v / d)
        },
        min_len: 1e-9 * rect.diameter(),
    };
    w.roots(rect)
}

/// Roots closer to the origin than this count as `λ = 0`.
pub const ORIGIN_SNAP: f64 = 1e-12;

/// `N(r) = Σ_{0<|λ|<r} m·ln(r/|λ|) + n(0)·ln r`.
pub fn counting_function(roots: &[Root], r: f64) -> f64 {
    roots
        .iter()
        .map(|root| {
            let a = root.location.norm();
            let m = root.multiplicity as f64;
            if a <= ORIGIN_SNAP {
                m * r.ln()
            } else if a < r {
                m * (r / a).ln()
            } else {
                0.0
            }
        })
        .sum()
}

fn circle_pieces(r: f64) -> usize {
    16 + (r / 2.0).ceil() as usize
}

/// Breaks on `[0, 2π]` clustered where the circle meets ℝ, where `B` winds
/// fastest and roots of `B − c` may sit close to the contour.
fn circle_breaks(r: f64) -> Vec<f64> {
    let upper = angular_breaks(r);
    let mut coarse: Vec<f64> = upper.clone();
    coarse.extend(upper.iter().skip(1).map(|phi| PI + phi));
    let h = 2.0 * PI / circle_pieces(r) as f64;
    let mut out = vec![0.0];
    for w in coarse.windows(2) {
        let n = ((w[1] - w[0]) / h).ceil().max(1.0) as usize;
        for k in 1..=n {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / n as f64);
        }
    }
    out
}

/// `𝔪(r, c) = −∫ ln[B(re^{iφ}), c] dφ/2π` with the chordal metric.
pub fn proximity<E: InnerEvaluator + ?Sized>(b: &E, bc: BoundaryCondition, r: f64) -> Result<f64> {
    proximity_with(b, bc, r, &QuadOptions::tol(1e-9, 1e-9))
}

pub fn proximity_with<E: InnerEvaluator + ?Sized>(b: &E, bc: BoundaryCondition, r: f64, opts: &QuadOptions) -> Result<f64> {
    let c = bc.as_option();
    let run = |r: f64| {
        let mut hit = false;
        let q = integrate_breaks(
            &mut |phi| {
                let v = -b.eval_proj(C::from_polar(r, phi)).ln_chordal(c);
                if v.is_infinite() {
                    hit = true;
                    0.0
                } else {
                    v
                }
            },
            &circle_breaks(r),
            opts,
        );
        (q, hit)
    };
    let (mut q, hit) = run(r);
    if hit {
        q = run(r * (1.0 + 1e-9)).0;
    }
    Ok(q?.value / (2.0 * PI))
}

/// `h(r) = (1/2π)∫_{−r}^{r} θ′(u) ln(r/|u|) du`.
pub fn height<E: InnerEvaluator + ?Sized>(b: &E, r: f64) -> Result<f64> {
    height_with(b, r, &QuadOptions::tol(1e-12, 1e-13))
}

pub fn height_with<E: InnerEvaluator + ?Sized>(b: &E, r: f64, opts: &QuadOptions) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain("height needs r > 0".into()));
    }
    let mut err = None;
    let q = integrate_log_weight(
        |u| match (b.phase_jet(u), b.phase_jet(-u)) {
            (Ok(p), Ok(m)) => p[0] + m[0],
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                f64::NAN
            }
        },
        r,
        8 + (2.0 * r).ceil() as usize,
        opts,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(q?.value / (2.0 * PI))
}

fn angular_breaks(rho: f64) -> Vec<f64> {
    let mut left = vec![0.0];
    for s in [0.25, 1.0, 4.0, 16.0] {
        let phi = s / rho.max(1e-300);
        if phi < 0.5 * PI {
            left.push(phi);
        }
    }
    left.push(0.5 * PI);
    let mut breaks = left.clone();
    for &phi in left.iter().rev().skip(1) {
        breaks.push(PI - phi);
    }
    breaks
}

/// `T_F(r) = (1/π)∬_{|λ|<r} ω ln(r/|λ|) dA`, as twice the upper half-disc integral.
pub fn charfn_tf<E: InnerEvaluator + ?Sized>(b: &E, r: f64) -> Result<f64> {
    // Near the axis ω carries cancellation noise of order 1e-11, so the
    // absolute tolerances sit above that floor.
    charfn_tf_with(b, r, &QuadOptions::tol(1e-9, 1e-10), &QuadOptions::tol(1e-8 * (1.0 + r), 1e-9))
}

pub fn charfn_tf_with<E: InnerEvaluator + ?Sized>(b: &E, r: f64, inner: &QuadOptions, outer: &QuadOptions) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain("T_F needs r > 0".into()));
    }
    let mut err = None;
    let q = integrate_log_weight(
        |rho| {
            if err.is_some() || rho == 0.0 {
                return 0.0;
            }
            let breaks = angular_breaks(rho);
            let mut f = |phi: f64| match omega(b, C::from_polar(rho, phi)) {
                Ok(w) => w,
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            };
            match integrate_breaks(&mut f, &breaks, inner) {
                Ok(q) => rho * q.value,
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            }
        },
        r,
        8 + (r / 2.0).ceil() as usize,
        outer,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(2.0 * q?.value / PI)
}

/// `T_F` from the boundary form obtained by Green's identity with `ω = ¼Δ ln χ`:
/// `T_F(r) = (1/2π)∫₀^π ln χ(re^{iφ}) dφ − ½ ln χ(0) + h(r)`.
/// Independent of [`charfn_tf`]; used to cross-check the area quadrature.
pub fn charfn_tf_boundary<E: InnerEvaluator + ?Sized>(b: &E, r: f64) -> Result<f64> {
    let mut err = None;
    let mut f = |phi: f64| match chi_with(b, C::from_polar(r, phi), 1e-8) {
        Ok(x) => x.ln(),
        Err(e) => {
            err = Some(e);
            0.0
        }
    };
    let q = integrate_breaks(&mut f, &angular_breaks(r), &QuadOptions::tol(1e-12, 1e-12));
    if let Some(e) = err {
        return Err(e);
    }
    let chi0 = chi(b, C::new(0.0, 0.0))?;
    Ok(q?.value / (2.0 * PI) - 0.5 * chi0.ln() + height(b, r)?)
}

/// `T_f(r) = ∫ ln⁺|f(re^{iφ})| dφ/2π`.
pub fn nevanlinna_t_entire<F: Fn(C) -> C>(f: F, r: f64) -> Result<f64> {
    nevanlinna_t_log(|z| f(z).norm().ln(), r)
}

/// Same, from `ln|f|` directly, for functions whose modulus overflows.
pub fn nevanlinna_t_log<F: Fn(C) -> f64>(ln_abs: F, r: f64) -> Result<f64> {
    let q = integrate_pieces(
        |phi| ln_abs(C::from_polar(r, phi)).max(0.0),
        0.0,
        2.0 * PI,
        circle_pieces(r),
        &QuadOptions::tol(1e-10, 1e-10),
    )?;
    Ok(q.value / (2.0 * PI))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub r_grid: Vec<f64>,
    pub h_values: Vec<f64>,
    pub tf_values: Option<Vec<f64>>,
    pub n_values: Vec<f64>,
    pub m_values: Vec<f64>,
    /// `min 𝔪/h` over the top half of the grid, clamped to [0, 1].
    pub defect_estimate: f64,
    /// The same minimum before clamping.
    pub defect_raw: f64,
}

/// Tabulates `h`, `N`, `𝔪` and the defect estimate. Roots are found in the
/// square of half-width `max r` unless supplied.
pub fn defect<E: InnerEvaluator + ?Sized>(
    b: &E,
    bc: BoundaryCondition,
    r_grid: &[f64],
    roots: Option<&[Root]>,
) -> Result<GrowthReport> {
    if r_grid.len() < 2 || r_grid.windows(2).any(|w| !(w[1] > w[0])) || !(r_grid[0] > 0.0) {
        return Err(Error::Validation("r grid must be positive and increasing".into()));
    }
    let rmax = *r_grid.last().unwrap();
    if rmax / r_grid[0] < 10.0 * (1.0 - 1e-12) {
        return Err(Error::Validation("r grid must span at least one decade".into()));
    }
    let owned;
    let roots = match roots {
        Some(r) => r,
        None => {
            owned = spectrum_of(b, bc, Window::square(rmax * (1.0 + 1e-6)))?;
            &owned
        }
    };
    let mut h_values = Vec::with_capacity(r_grid.len());
    let mut n_values = Vec::with_capacity(r_grid.len());
    let mut m_values = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        h_values.push(height(b, r)?);
        n_values.push(counting_function(roots, r));
        m_values.push(proximity(b, bc, r)?);
    }
    let half = r_grid.len() / 2;
    let raw = (half..r_grid.len()).map(|k| m_values[k] / h_values[k]).fold(f64::INFINITY, f64::min);
    Ok(GrowthReport {
        r_grid: r_grid.to_vec(),
        h_values,
        tf_values: None,
        n_values,
        m_values,
        defect_estimate: raw.clamp(0.0, 1.0),
        defect_raw: raw,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderType {
    pub order: f64,
    pub type_: f64,
    pub rms_residual: f64,
    pub points: usize,
}

/// Order from the log-log slope over the top decade; type as `max value/r^ρ` there.
pub fn order_type_fit(r_grid: &[f64], values: &[f64]) -> Result<OrderType> {
    if r_grid.len() != values.len() || r_grid.is_empty() {
        return Err(Error::Validation("r grid and values must have equal nonzero length".into()));
    }
    let rmax = r_grid.iter().cloned().fold(f64::MIN, f64::max);
    let idx: Vec<usize> = (0..r_grid.len()).filter(|&k| r_grid[k] >= rmax / 10.0 * (1.0 - 1e-12)).collect();
    if idx.len() < 8 {
        return Err(Error::InsufficientRange { needed: 8, have: idx.len() });
    }
    if idx.iter().any(|&k| !(values[k] > 0.0)) {
        return Err(Error::Validation("values must be positive on the top decade".into()));
    }
    let x: Vec<f64> = idx.iter().map(|&k| r_grid[k].ln()).collect();
    let y: Vec<f64> = idx.iter().map(|&k| values[k].ln()).collect();
    let fit = fit_line(&x, &y)?;
    let tau = idx.iter().map(|&k| values[k] / r_grid[k].powf(fit.slope)).fold(f64::MIN, f64::max);
    Ok(OrderType { order: fit.slope, type_: tau, rms_residual: fit.rms_residual, points: idx.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::geomspace;

    const I: C = C { re: 0.0, im: 1.0 };

    #[test]
    fn classification() {
        assert_eq!(BoundaryCondition::Finite(C::new(0.0, 1.0)).class(), BcClass::SelfAdjoint);
        assert_eq!(BoundaryCondition::real(0.5).class(), BcClass::StrictlyDissipative);
        assert_eq!(BoundaryCondition::real(2.0).class(), BcClass::StrictlyAccumulative);
        assert_eq!(BoundaryCondition::Infinity.class(), BcClass::StrictlyAccumulative);
    }

    #[test]
    fn spectrum_of_exp_pi() {
        let s = InnerFunctionSpec::exponential(PI).unwrap();
        let even: Vec<f64> = spectrum(&s, BoundaryCondition::real(1.0), Window::real(-5.0, 5.0))
            .unwrap()
            .iter()
            .map(|r| r.location.re)
            .collect();
        assert_eq!(even.len(), 5);
        for (x, want) in even.iter().zip([-4.0, -2.0, 0.0, 2.0, 4.0]) {
            assert!((x - want).abs() < 1e-12);
        }
        let odd = spectrum(&s, BoundaryCondition::real(-1.0), Window::real(-5.0, 5.0)).unwrap();
        assert_eq!(odd.len(), 4);
        // Same roots through the generic scan.
        let generic = spectrum_of(&s, BoundaryCondition::real(-1.0), Window::real(-5.0, 5.0)).unwrap();
        for (a, b) in odd.iter().zip(&generic) {
            assert!((a.location - b.location).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_of_blaschke_factor() {
        let s = InnerFunctionSpec::blaschke(&[I]).unwrap();
        let r = spectrum(&s, BoundaryCondition::real(0.0), Window::square(2.0)).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].location - I).norm() < 1e-12 && r[0].multiplicity == 1);
        let poles = spectrum(&s, BoundaryCondition::Infinity, Window::square(2.0)).unwrap();
        assert!((poles[0].location + I).norm() < 1e-12);
    }

    #[test]
    fn double_zero_multiplicity() {
        let s = InnerFunctionSpec::new(C::new(1.0, 0.0), 0.0, vec![crate::inner::Zero::new(C::new(0.3, 0.8), 2)]).unwrap();
        let r = spectrum(&s, BoundaryCondition::real(0.0), Window::square(2.0)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        assert!((r[0].location - C::new(0.3, 0.8)).norm() < 1e-6);
    }

    #[test]
    fn counting_examples() {
        let e = std::f64::consts::E;
        let two = [Root { location: C::new(2.0, 0.0), multiplicity: 1 }];
        assert!((counting_function(&two, 2.0 * e) - 1.0).abs() < 1e-15);
        assert_eq!(counting_function(&[], 3.0), 0.0);
        let zero = [Root { location: C::new(0.0, 0.0), multiplicity: 1 }];
        assert!((counting_function(&zero, e) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn height_closed_forms() {
        let s = InnerFunctionSpec::exponential(1.0).unwrap();
        assert!((height(&s, PI).unwrap() - 1.0).abs() < 1e-12);
        let bl = InnerFunctionSpec::blaschke(&[I]).unwrap();
        assert!((height(&bl, 1.0).unwrap() - 0.583_121_808_061_637_9).abs() < 1e-10);
    }

    #[test]
    fn proximity_of_constant_and_positive() {
        let g = C::from_polar(1.0, 0.4);
        let s = InnerFunctionSpec::new(g, 0.0, vec![]).unwrap();
        let c = C::new(0.3, 0.1);
        let want = -((g - c).norm() / (2.0f64.sqrt() * (1.0 + c.norm_sqr()).sqrt())).ln();
        assert!((proximity(&s, BoundaryCondition::Finite(c), 5.0).unwrap() - want).abs() < 1e-12);
        let bl = InnerFunctionSpec::blaschke(&[I]).unwrap();
        assert!(proximity(&bl, BoundaryCondition::real(0.0), 1.0).unwrap() >= 0.0);
    }

    #[test]
    fn tf_of_flat_and_boundary_form() {
        let bl = InnerFunctionSpec::blaschke(&[I]).unwrap();
        assert!(charfn_tf(&bl, 3.0).unwrap().abs() < 1e-8);
        assert!(charfn_tf_boundary(&bl, 3.0).unwrap().abs() < 1e-8);
        let s = InnerFunctionSpec::exponential(1.0).unwrap();
        let a = charfn_tf(&s, 5.0).unwrap();
        let b = charfn_tf_boundary(&s, 5.0).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} {b}");
    }

    #[test]
    fn nevanlinna_examples() {
        assert!((nevanlinna_t_entire(|z| z.exp(), 3.0).unwrap() - 3.0 / PI).abs() < 1e-6);
        assert_eq!(nevanlinna_t_entire(|_| C::new(0.5, 0.0), 3.0).unwrap(), 0.0);
        let e2 = std::f64::consts::E.powi(2);
        assert!((nevanlinna_t_entire(|z| z, e2).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn order_fit_examples() {
        let r = geomspace(10.0, 1000.0, 16);
        let sq: Vec<f64> = r.iter().map(|x| x * x).collect();
        assert!((order_type_fit(&r, &sq).unwrap().order - 2.0).abs() < 1e-12);
        let lg: Vec<f64> = r.iter().map(|x| x.ln()).collect();
        assert!(order_type_fit(&r, &lg).unwrap().order < 0.3);
        assert!(matches!(order_type_fit(&r[..5], &sq[..5]), Err(Error::InsufficientRange { .. })));
    }
}
