//! Curvature `χ`, `ω` of the characteristic line bundle, the Schwarzian,
//! and the Sturm-Liouville equation `y″ + 3ωy = 0`.

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::inner::{HerglotzEvaluator, InnerEvaluator};
use crate::numerics::ode::{dopri, OdeOptions, OdeSolution};
use crate::numerics::roots::bisect;
use crate::numerics::CubicSpline;

/// Below this `|Im λ|` the on-axis formulas are used.
pub const AXIS_EPSILON: f64 = 1e-3;

pub fn chi<E: InnerEvaluator + ?Sized>(b: &E, lambda: C) -> Result<f64> {
    chi_with(b, lambda, AXIS_EPSILON)
}

pub fn chi_with<E: InnerEvaluator + ?Sized>(b: &E, lambda: C, axis_epsilon: f64) -> Result<f64> {
    let v = lambda.im;
    if v.abs() <= axis_epsilon {
        return Ok(b.phase_jet(lambda.re)?[0]);
    }
    if b.eval_proj(lambda).is_infinite() {
        return Err(Error::PoleEvaluation { at: lambda });
    }
    let one_minus = if v > 0.0 {
        b.ln_one_minus_abs_sq(lambda).exp()
    } else {
        -(2.0 * b.ln_abs(lambda)).exp_m1()
    };
    Ok(one_minus / (2.0 * v))
}

/// `ω` on ℝ from the phase derivatives.
pub fn omega_from_phase(d: [f64; 3]) -> f64 {
    let [p, q, r] = d;
    0.25 * (p * p / 3.0 + (2.0 / 3.0) * r / p - (q / p) * (q / p))
}

pub fn omega<E: InnerEvaluator + ?Sized>(b: &E, lambda: C) -> Result<f64> {
    omega_with(b, lambda, AXIS_EPSILON)
}

pub fn omega_with<E: InnerEvaluator + ?Sized>(b: &E, lambda: C, axis_epsilon: f64) -> Result<f64> {
    if lambda.im.abs() <= axis_epsilon {
        return Ok(omega_from_phase(b.phase_jet(lambda.re)?));
    }
    // ω(λ̄) = ω(λ); the upper half-plane keeps B bounded.
    let z = if lambda.im > 0.0 { lambda } else { lambda.conj() };
    let v = z.im;
    let j = b.jet(z)?;
    let ln_den = b.ln_one_minus_abs_sq(z);
    if !ln_den.is_finite() {
        return Err(Error::PoleEvaluation { at: lambda });
    }
    let r = j[1].norm() * (-ln_den).exp();
    Ok(0.25 / (v * v) - r * r)
}

/// `ω = (1/4v²)(1 − (|M′| v / Im M)²)` off the axis.
pub fn omega_from_weyl<H: HerglotzEvaluator + ?Sized>(m: &H, lambda: C) -> Result<f64> {
    let v = lambda.im;
    if v == 0.0 {
        return Err(Error::Domain("omega_from_weyl needs Im λ ≠ 0".into()));
    }
    let j = m.jet(lambda)?;
    let ratio = j[1].norm() * v / j[0].im;
    Ok(0.25 / (v * v) * (1.0 - ratio * ratio))
}

/// A real function of a real variable, optionally with analytic derivatives.
pub trait RealAnalytic {
    fn value(&self, u: f64) -> Result<f64>;

    /// `(f, f′, f″, f‴)` when available in closed form.
    fn jet(&self, _u: f64) -> Result<Option<[f64; 4]>> {
        Ok(None)
    }
}

/// A Herglotz function restricted to the real axis.
pub struct OnAxis<H>(pub H);

impl<H: HerglotzEvaluator> RealAnalytic for OnAxis<H> {
    fn value(&self, u: f64) -> Result<f64> {
        Ok(self.0.eval(C::new(u, 0.0))?.re)
    }
    fn jet(&self, u: f64) -> Result<Option<[f64; 4]>> {
        let j = self.0.jet(C::new(u, 0.0))?;
        Ok(Some([j[0].re, j[1].re, j[2].re, j[3].re]))
    }
}

/// A plain closure, differentiated numerically.
pub struct RealFn<F>(pub F);

impl<F: Fn(f64) -> f64> RealAnalytic for RealFn<F> {
    fn value(&self, u: f64) -> Result<f64> {
        Ok((self.0)(u))
    }
}

/// Seven-point central differences for the first three derivatives.
pub fn finite_difference_jet<F: Fn(f64) -> Result<f64>>(f: F, u: f64, h: f64) -> Result<[f64; 4]> {
    let mut v = [0.0; 7];
    for (k, slot) in v.iter_mut().enumerate() {
        *slot = f(u + (k as f64 - 3.0) * h)?;
    }
    let [m3, m2, m1, f0, p1, p2, p3] = v;
    let d1 = (-m3 + 9.0 * m2 - 45.0 * m1 + 45.0 * p1 - 9.0 * p2 + p3) / (60.0 * h);
    let d2 = (2.0 * m3 - 27.0 * m2 + 270.0 * m1 - 490.0 * f0 + 270.0 * p1 - 27.0 * p2 + 2.0 * p3) / (180.0 * h * h);
    let d3 = (m3 - 8.0 * m2 + 13.0 * m1 - 13.0 * p1 + 8.0 * p2 - p3) / (8.0 * h * h * h);
    Ok([f0, d1, d2, d3])
}

/// `𝒮f = (f″/f′)′ − ½(f″/f′)²`.
pub fn schwarzian(f: &dyn RealAnalytic, u: f64) -> Result<f64> {
    let j = match f.jet(u)? {
        Some(j) => j,
        None => finite_difference_jet(|x| f.value(x), u, 1e-2 * u.abs().max(1.0))?,
    };
    if !(j[1].abs() >= 1e-12) {
        return Err(Error::DegenerateDerivative { at: u, value: j[1] });
    }
    let q = j[2] / j[1];
    Ok(j[3] / j[1] - 1.5 * q * q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureSource {
    FromInner,
    FromWeyl,
    FromPolynomials,
    Tabulated,
}

/// Samples of `ω` on ℝ, interpolated by a natural cubic spline.
#[derive(Debug, Clone)]
pub struct CurvatureProfile {
    pub grid: Vec<f64>,
    pub omega_values: Vec<f64>,
    pub source: CurvatureSource,
    spline: CubicSpline,
}

impl CurvatureProfile {
    pub fn new(grid: Vec<f64>, omega_values: Vec<f64>, source: CurvatureSource) -> Result<Self> {
        if let Some(w) = omega_values.iter().find(|w| !(**w >= -1e-10)) {
            return Err(Error::Validation(format!("curvature sample {w} is negative")));
        }
        let spline = CubicSpline::new(&grid, &omega_values)?;
        Ok(Self { grid, omega_values, source, spline })
    }

    pub fn from_fn<F: FnMut(f64) -> Result<f64>>(grid: Vec<f64>, mut f: F, source: CurvatureSource) -> Result<Self> {
        let values = grid.iter().map(|&u| f(u)).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values, source)
    }

    pub fn from_inner<E: InnerEvaluator + ?Sized>(b: &E, grid: Vec<f64>) -> Result<Self> {
        Self::from_fn(grid, |u| omega(b, C::new(u, 0.0)), CurvatureSource::FromInner)
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.spline.eval(u)
    }

    pub fn max(&self) -> f64 {
        self.omega_values.iter().cloned().fold(0.0, f64::max)
    }

    fn span(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }

    /// Spacing below which oscillations of `y″ + 3ωy = 0` are resolved.
    pub fn resolution(&self) -> f64 {
        let m = self.max();
        if m > 0.0 {
            PI / (10.0 * (3.0 * m).sqrt())
        } else {
            f64::INFINITY
        }
    }

    fn check_interval(&self, a: f64, b: f64) -> Result<()> {
        let (lo, hi) = self.span();
        if !(a < b) || a < lo || b > hi {
            return Err(Error::Domain(format!("interval [{a}, {b}] outside profile span [{lo}, {hi}]")));
        }
        Ok(())
    }
}

fn ode_opts(interval: f64) -> OdeOptions {
    OdeOptions { max_step: (interval / 200.0).min(0.05), ..OdeOptions::default() }
}

/// Dense solution of `y″ + 3ω(u)y = 0`.
#[derive(Debug, Clone)]
pub struct SlTrajectory {
    sol: OdeSolution<2>,
    resolution: f64,
}

impl SlTrajectory {
    pub fn y(&self, u: f64) -> f64 {
        self.sol.eval(u)[0]
    }

    pub fn dy(&self, u: f64) -> f64 {
        self.sol.eval(u)[1]
    }

    /// Zeros by a sign scan at the oscillation resolution, then bisection.
    pub fn zeros(&self) -> Vec<f64> {
        let (a, b) = (self.sol.t_min(), self.sol.t_max());
        let step = self.resolution.min((b - a) / 1000.0);
        let n = ((b - a) / step).ceil() as usize;
        let mut out = Vec::new();
        let mut x0 = a;
        let mut f0 = self.y(a);
        for k in 1..=n {
            let x1 = a + (b - a) * k as f64 / n as f64;
            let f1 = self.y(x1);
            if f0 == 0.0 {
                out.push(x0);
            } else if f1 != 0.0 && (f0 > 0.0) != (f1 > 0.0) {
                out.push(bisect(|x| self.y(x), x0, x1, 1e-12));
            }
            x0 = x1;
            f0 = f1;
        }
        out
    }
}

pub fn sl_solve(profile: &CurvatureProfile, interval: [f64; 2], init: (f64, f64)) -> Result<SlTrajectory> {
    let [a, b] = interval;
    profile.check_interval(a, b)?;
    let limit = profile.resolution();
    let spacing = profile.grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if spacing > limit {
        return Err(Error::GridTooCoarse { spacing, limit });
    }
    let sol = dopri(
        |u, y| [y[1], -3.0 * profile.eval(u) * y[0]],
        a,
        [init.0, init.1],
        b,
        &ode_opts(b - a),
        |_, _| Ok(()),
    )?;
    Ok(SlTrajectory { sol, resolution: limit })
}

/// Two solutions on a grid with their Wronskian `y₁y₂′ − y₁′y₂`.
#[derive(Debug, Clone)]
pub struct SLSolution {
    pub grid: Vec<f64>,
    pub y1_values: Vec<f64>,
    pub y2_values: Vec<f64>,
    pub wronskian: f64,
    /// Largest relative departure of the Wronskian from its mean on the grid.
    pub wronskian_drift: f64,
}

pub fn sl_pair(
    profile: &CurvatureProfile,
    interval: [f64; 2],
    init1: (f64, f64),
    init2: (f64, f64),
    grid: &[f64],
) -> Result<SLSolution> {
    let s1 = sl_solve(profile, interval, init1)?;
    let s2 = sl_solve(profile, interval, init2)?;
    let w: Vec<f64> = grid.iter().map(|&u| s1.y(u) * s2.dy(u) - s1.dy(u) * s2.y(u)).collect();
    let mean = w.iter().sum::<f64>() / w.len().max(1) as f64;
    let drift = w.iter().map(|x| ((x - mean) / mean).abs()).fold(0.0, f64::max);
    Ok(SLSolution {
        grid: grid.to_vec(),
        y1_values: grid.iter().map(|&u| s1.y(u)).collect(),
        y2_values: grid.iter().map(|&u| s2.y(u)).collect(),
        wronskian: mean,
        wronskian_drift: drift,
    })
}

/// Phase normalised by `θ(0)=0, θ′(0)=1, θ″(0)=0`, rebuilt from `ω`.
#[derive(Debug, Clone)]
pub struct PhaseFromCurvature {
    forward: OdeSolution<3>,
    backward: OdeSolution<3>,
    profile: CurvatureProfile,
}

fn phase_rhs(profile: &CurvatureProfile, u: f64, y: &[f64; 3]) -> [f64; 3] {
    let p = y[1];
    let q = y[2];
    // (2/3)θ‴/θ′ − (θ″/θ′)² + θ′²/3 = 4ω
    let r = 1.5 * p * (4.0 * profile.eval(u) + (q / p) * (q / p) - p * p / 3.0);
    [p, q, r]
}

impl PhaseFromCurvature {
    fn state(&self, u: f64) -> [f64; 3] {
        if u >= 0.0 {
            self.forward.eval(u)
        } else {
            self.backward.eval(u)
        }
    }

    pub fn theta(&self, u: f64) -> f64 {
        self.state(u)[0]
    }

    /// `(θ′, θ″, θ‴)`.
    pub fn derivatives(&self, u: f64) -> [f64; 3] {
        let y = self.state(u);
        let r = phase_rhs(&self.profile, u, &y)[2];
        [y[1], y[2], r]
    }
}

pub fn phase_from_curvature(profile: &CurvatureProfile, interval: [f64; 2]) -> Result<PhaseFromCurvature> {
    let [a, b] = interval;
    if !(a <= 0.0 && 0.0 <= b) {
        return Err(Error::Domain("phase reconstruction interval must contain 0".into()));
    }
    profile.check_interval(a, b)?;
    let guard = |u: f64, y: &[f64; 3]| {
        if y[1] > 1e-12 && y[1] < 1e12 && y.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::BlowUp { at: u })
        }
    };
    let opts = ode_opts(b - a);
    let f = |u: f64, y: &[f64; 3]| phase_rhs(profile, u, y);
    let forward = dopri(f, 0.0, [0.0, 1.0, 0.0], b, &opts, guard)?;
    let backward = dopri(f, 0.0, [0.0, 1.0, 0.0], a, &opts, guard)?;
    Ok(PhaseFromCurvature { forward, backward, profile: profile.clone() })
}

/// Bounds on the number of self-adjoint eigenvalues in `(−r, r)` when
/// `ω_lo ≤ ω ≤ ω_hi` on the interval, from Sturm comparison.
pub fn eigenvalue_count_bounds(omega_lo: f64, omega_hi: f64, r: f64) -> (i64, i64) {
    let k = |w: f64| (2.0 * r * (3.0 * w.max(0.0)).sqrt() / PI).floor() as i64;
    ((k(omega_lo) - 1).max(0), k(omega_hi) + 1)
}
