//! Command dispatch: each command turns an operator spec and parameters into
//! a [`Report`].

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use weyl_lab_core::completeness::{default_y_grid, is_complete, mean_type_estimate, riesz_diagnostic, sector_summability, Biorthogonal, RieszVerdict};
use weyl_lab_core::geometry::{chi_with, omega_with};
use weyl_lab_core::inner::{cayley_to_weyl, herglotz_to_inner, HerglotzEvaluator, InnerEvaluator};
use weyl_lab_core::models::{debranges_from_inner, kernel_k1, kernel_k2, kernel_k3, kernel_k4, kernel_k5, sample_reconstruct, KernelId, KernelMatrix};
use weyl_lab_core::moment::{
    curvature_bound_from_polys, curvature_from_polys, default_window, moments_from_jacobi, nevanlinna_entries, p_norm, shift_and_pedersen,
    tf_moment, von_neumann_measure, von_neumann_spectrum, wronskian, JacobiInner, JacobiSpec, JacobiWeyl, TParam, Truncation,
};
use weyl_lab_core::numerics::linspace;
use weyl_lab_core::numerics::quad::QuadOptions;
use weyl_lab_core::vdt::{charfn_tf_with, counting_function, defect, height_with, spectrum, spectrum_of, BoundaryCondition, Root, Window};
use weyl_lab_core::{Complex64 as C, Error};

use crate::report::{Cell, Kind, Report};
use crate::spec_file::{NumericPolicy, Operator, OperatorSpecFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Eval,
    Phase,
    Curvature,
    Spectrum,
    Growth,
    Defect,
    Kernels,
    Sample,
    Completeness,
    Riesz,
    MomentMatrix,
    MomentSpectrum,
    MomentGrowth,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Phase => "phase",
            Command::Curvature => "curvature",
            Command::Spectrum => "spectrum",
            Command::Growth => "growth",
            Command::Defect => "defect",
            Command::Kernels => "kernels",
            Command::Sample => "sample",
            Command::Completeness => "completeness",
            Command::Riesz => "riesz",
            Command::MomentMatrix => "moment-matrix",
            Command::MomentSpectrum => "moment-spectrum",
            Command::MomentGrowth => "moment-growth",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KernelChoice {
    K1,
    K2,
    K3,
    K4,
    K5,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub bc: Option<BoundaryCondition>,
    pub rmax: Option<f64>,
    pub window: Option<(f64, f64)>,
    /// Explicit evaluation points; override the window grid.
    pub at: Vec<C>,
    pub points: Option<usize>,
    /// Imaginary offset of the window grid.
    pub im: Option<f64>,
    pub kernel: Option<KernelChoice>,
    pub delta: Option<f64>,
}

/// `inf`, a real `x`, or `re,im`.
pub fn parse_bc(s: &str) -> Result<BoundaryCondition, String> {
    let t = s.trim();
    if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
        return Ok(BoundaryCondition::Infinity);
    }
    parse_complex(t).map(BoundaryCondition::Finite)
}

/// `x` or `re,im`.
pub fn parse_complex(s: &str) -> Result<C, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| format!("`{p}` is not a finite number"));
    match parts.as_slice() {
        [x] => Ok(C::new(num(x)?, 0.0)),
        [re, im] => Ok(C::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `x` or `re,im`, got `{s}`")),
    }
}

impl Params {
    /// Normalised parameter echo, independent of flag order.
    fn echo(&self) -> String {
        let mut s = String::new();
        if let Some(bc) = self.bc {
            match bc {
                BoundaryCondition::Infinity => s.push_str(" --bc inf"),
                BoundaryCondition::Finite(c) => s.push_str(&format!(" --bc {},{}", c.re, c.im)),
            }
        }
        if let Some(r) = self.rmax {
            s.push_str(&format!(" --rmax {r}"));
        }
        if let Some((a, b)) = self.window {
            s.push_str(&format!(" --window {a} {b}"));
        }
        for z in &self.at {
            s.push_str(&format!(" --at {},{}", z.re, z.im));
        }
        if let Some(n) = self.points {
            s.push_str(&format!(" --points {n}"));
        }
        if let Some(y) = self.im {
            s.push_str(&format!(" --im {y}"));
        }
        if let Some(k) = self.kernel {
            s.push_str(&format!(" --kernel {}", format!("{k:?}").to_lowercase()));
        }
        if let Some(d) = self.delta {
            s.push_str(&format!(" --delta {d}"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    /// Bad parameters, or a spec of the wrong kind for the command.
    Validation(String),
    Numeric(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Validation(m) => write!(f, "{m}"),
            RunError::Numeric(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for RunError {}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    /// Failed checks of `verify`; zero for other commands.
    pub failures: usize,
}

type R<T> = std::result::Result<T, RunError>;

/// 0 on success, 2 for bad input, 3 for numeric failure, 4 when `verify` finds a failed check.
pub fn exit_code(result: &R<Outcome>) -> u8 {
    match result {
        Ok(o) if o.failures > 0 => 4,
        Ok(_) => 0,
        Err(RunError::Validation(_)) => 2,
        Err(RunError::Numeric(_)) => 3,
    }
}

/// Roundoff-level absolute tolerance for a directly evaluated value.
fn rt(v: f64) -> f64 {
    64.0 * f64::EPSILON * (1.0 + v.abs())
}

/// Tolerance for values built from derivative jets.
fn jt(v: f64) -> f64 {
    1e-12 * (1.0 + v.abs())
}

fn ct(z: C) -> f64 {
    rt(z.norm())
}

const ROOT_TOL: f64 = 1e-12;

struct Ctx<'a> {
    cmd: Command,
    params: &'a Params,
    policy: NumericPolicy,
    op: &'a Operator,
    digest: &'a str,
}

impl<'a> Ctx<'a> {
    fn err(&self, e: Error) -> RunError {
        let msg = format!("{}: {e}", self.cmd.name());
        match e {
            Error::Validation(_) => RunError::Validation(msg),
            _ => RunError::Numeric(msg),
        }
    }

    fn invalid(&self, m: impl fmt::Display) -> RunError {
        RunError::Validation(format!("{}: {m}", self.cmd.name()))
    }

    fn report(&self, columns: &[(&str, Kind)]) -> Report {
        Report::new(format!("{}{}", self.cmd.name(), self.params.echo()), self.digest.to_string(), self.policy, columns)
    }

    fn window(&self, default: (f64, f64)) -> R<(f64, f64)> {
        let w = self.params.window.unwrap_or(default);
        if !(w.0 < w.1) || !w.0.is_finite() || !w.1.is_finite() {
            return Err(self.invalid(format!("window [{}, {}] must be finite with a < b", w.0, w.1)));
        }
        Ok(w)
    }

    fn rmax(&self) -> R<f64> {
        let r = self.params.rmax.unwrap_or(self.policy.caps.sampling_radius);
        if !(r > 0.0) || !r.is_finite() {
            return Err(self.invalid(format!("rmax must be positive, got {r}")));
        }
        Ok(r)
    }

    /// `--at` points, else `n` points across the window shifted by `i·im`.
    fn points(&self, window: (f64, f64), n: usize, im: f64) -> R<Vec<C>> {
        if !self.params.at.is_empty() {
            return Ok(self.params.at.clone());
        }
        let w = self.window(window)?;
        let n = self.params.points.unwrap_or(n);
        if n == 0 {
            return Err(self.invalid("--points must be positive"));
        }
        let y = self.params.im.unwrap_or(im);
        Ok(linspace(w.0, w.1, n).into_iter().map(|u| C::new(u, y)).collect())
    }

    fn real_points(&self, window: (f64, f64), n: usize) -> R<Vec<f64>> {
        if let Some(z) = self.params.at.iter().find(|z| z.im != 0.0) {
            return Err(self.invalid(format!("point {z} must be real for this command")));
        }
        if self.params.im.is_some_and(|y| y != 0.0) {
            return Err(self.invalid("--im is not used by this command"));
        }
        Ok(self.points(window, n, 0.0)?.into_iter().map(|z| z.re).collect())
    }

    fn bc(&self) -> BoundaryCondition {
        self.params.bc.unwrap_or(BoundaryCondition::real(1.0))
    }

    fn quad(&self) -> QuadOptions {
        QuadOptions::tol(self.policy.quad_tol, self.policy.quad_tol)
    }

    fn inner_spec(&self) -> R<&'a weyl_lab_core::inner::InnerFunctionSpec> {
        match self.op {
            Operator::Inner(s) => Ok(s),
            other => Err(self.invalid(format!("needs an inner spec, got {}", other.kind()))),
        }
    }

    fn jacobi(&self) -> R<(&'a JacobiSpec, Truncation)> {
        match self.op {
            Operator::Jacobi { spec, trunc } => Ok((spec, *trunc)),
            other => Err(self.invalid(format!("needs a jacobi spec, got {}", other.kind()))),
        }
    }

    fn tparam(&self, default: f64) -> R<TParam> {
        match self.params.bc {
            None => Ok(TParam::real(default)),
            Some(BoundaryCondition::Infinity) => Ok(TParam::Infinity),
            Some(BoundaryCondition::Finite(t)) if t.im == 0.0 => Ok(TParam::real(t.re)),
            Some(BoundaryCondition::Finite(t)) => Err(self.invalid(format!("the Nevanlinna parameter must be real or inf, got {t}"))),
        }
    }
}

fn inner_of(op: &Operator) -> Box<dyn InnerEvaluator> {
    match op {
        Operator::Inner(s) => Box::new(s.clone()),
        Operator::Herglotz(h) => Box::new(herglotz_to_inner(h.clone())),
        Operator::Jacobi { spec, trunc } => Box::new(JacobiInner { spec: spec.clone(), trunc: *trunc }),
    }
}

fn weyl_of(op: &Operator) -> Box<dyn HerglotzEvaluator> {
    match op {
        Operator::Inner(s) => Box::new(cayley_to_weyl(s.clone())),
        Operator::Herglotz(h) => Box::new(h.clone()),
        Operator::Jacobi { spec, trunc } => Box::new(JacobiWeyl { spec: spec.clone(), trunc: *trunc }),
    }
}

/// Poles and overflow are reported as an infinite value rather than an error.
fn value_or_inf(r: weyl_lab_core::Result<C>) -> weyl_lab_core::Result<C> {
    match r {
        Err(Error::PoleEvaluation { .. }) | Err(Error::Overflow { .. }) => Ok(C::new(f64::INFINITY, f64::INFINITY)),
        other => other,
    }
}

fn roots_of(ctx: &Ctx, bc: BoundaryCondition, window: Window) -> R<Vec<Root>> {
    let mut roots = match ctx.op {
        Operator::Inner(s) => spectrum(s, bc, window),
        op => spectrum_of(&*inner_of(op), bc, window),
    }
    .map_err(|e| ctx.err(e))?;
    roots.sort_by(|a, b| a.location.re.total_cmp(&b.location.re).then(a.location.im.total_cmp(&b.location.im)));
    Ok(roots)
}

/// `r` from `rmax/100` to `rmax`, five points per decade.
fn r_grid(rmax: f64) -> Vec<f64> {
    weyl_lab_core::numerics::geomspace(rmax / 100.0, rmax, 5)
}

pub fn run(command: Command, file: &OperatorSpecFile, params: &Params) -> R<Outcome> {
    let ctx = Ctx { cmd: command, params, policy: file.numeric_policy, op: &file.operator, digest: &file.digest };
    let mut failures = 0;
    let report = match command {
        Command::Eval => eval(&ctx)?,
        Command::Phase => phase(&ctx)?,
        Command::Curvature => curvature(&ctx)?,
        Command::Spectrum => spectrum_cmd(&ctx)?,
        Command::Growth => growth(&ctx)?,
        Command::Defect => defect_cmd(&ctx)?,
        Command::Kernels => kernels(&ctx)?,
        Command::Sample => sample(&ctx)?,
        Command::Completeness => completeness(&ctx)?,
        Command::Riesz => riesz(&ctx)?,
        Command::MomentMatrix => moment_matrix(&ctx)?,
        Command::MomentSpectrum => moment_spectrum(&ctx)?,
        Command::MomentGrowth => moment_growth(&ctx)?,
        Command::Verify => {
            let (r, f) = verify(&ctx)?;
            failures = f;
            r
        }
    };
    Ok(Outcome { report, failures })
}

fn eval(ctx: &Ctx) -> R<Report> {
    let pts = ctx.points((-5.0, 5.0), 21, 0.0)?;
    let b = inner_of(ctx.op);
    let m = weyl_of(ctx.op);
    let mut rep = ctx.report(&[("lambda", Kind::Complex), ("B", Kind::Complex), ("ln_abs_B", Kind::Real), ("M", Kind::Complex)]);
    let rows: Vec<Vec<Cell>> = pts
        .par_iter()
        .map(|&z| {
            let bv = value_or_inf(b.value(z))?;
            let l = b.ln_abs(z);
            let mv = value_or_inf(m.eval(z))?;
            Ok(vec![Cell::Complex(z, 0.0), Cell::Complex(bv, ct(bv)), Cell::Real(l, rt(l)), Cell::Complex(mv, ct(mv))])
        })
        .collect::<weyl_lab_core::Result<_>>()
        .map_err(|e| ctx.err(e))?;
    rows.into_iter().for_each(|r| rep.push(r));
    Ok(rep)
}

fn phase(ctx: &Ctx) -> R<Report> {
    let us = ctx.real_points((-5.0, 5.0), 21)?;
    let b = inner_of(ctx.op);
    let spec = ctx.inner_spec().ok();
    let mut cols = vec![("u", Kind::Real)];
    if spec.is_some() {
        cols.push(("theta", Kind::Real));
    }
    cols.extend([("theta_1", Kind::Real), ("theta_2", Kind::Real), ("theta_3", Kind::Real)]);
    let mut rep = ctx.report(&cols);
    for u in us {
        let j = b.phase_jet(u).map_err(|e| ctx.err(e))?;
        let mut row = vec![Cell::Real(u, 0.0)];
        if let Some(s) = spec {
            let t = s.theta(u);
            row.push(Cell::Real(t, rt(t)));
        }
        row.extend(j.iter().map(|&v| Cell::Real(v, jt(v))));
        rep.push(row);
    }
    Ok(rep)
}

fn curvature(ctx: &Ctx) -> R<Report> {
    let pts = ctx.points((-5.0, 5.0), 21, 0.0)?;
    if let Some(z) = pts.iter().find(|z| z.im < 0.0) {
        return Err(ctx.invalid(format!("curvature is defined on the closed upper half-plane, got {z}")));
    }
    let b = inner_of(ctx.op);
    let eps = ctx.policy.axis_epsilon;
    let jac = ctx.jacobi().ok().filter(|_| pts.iter().all(|z| z.im == 0.0));
    let mut cols = vec![("lambda", Kind::Complex), ("chi", Kind::Real), ("omega", Kind::Real)];
    if jac.is_some() {
        cols.extend([("omega_polys", Kind::Real), ("omega_bound", Kind::Real)]);
    }
    let mut rep = ctx.report(&cols);
    let rows: Vec<Vec<Cell>> = pts
        .par_iter()
        .map(|&z| {
            let x = chi_with(&*b, z, eps)?;
            let w = omega_with(&*b, z, eps)?;
            // Off the axis both go through ln(1 − |B|²); the error grows like 1/Im λ there.
            let tol = |v: f64| if z.im == 0.0 { jt(v) } else { jt(v) * (1.0 + 1.0 / z.im.max(eps)) };
            let mut row = vec![Cell::Complex(z, 0.0), Cell::Real(x, tol(x)), Cell::Real(w, tol(w))];
            if let Some((s, tr)) = jac {
                let p = curvature_from_polys(s, z.re, tr)?;
                let q = curvature_bound_from_polys(s, z.re, tr)?;
                row.extend([Cell::Real(p, jt(p)), Cell::Real(q, jt(q))]);
            }
            Ok(row)
        })
        .collect::<weyl_lab_core::Result<_>>()
        .map_err(|e| ctx.err(e))?;
    rows.into_iter().for_each(|r| rep.push(r));
    Ok(rep)
}

fn spectrum_cmd(ctx: &Ctx) -> R<Report> {
    let (a, b) = ctx.window((-10.0, 10.0))?;
    let h = a.abs().max(b.abs());
    let roots = roots_of(ctx, ctx.bc(), Window::rect((a, b), (-h, h)))?;
    let mut rep = ctx.report(&[("index", Kind::Index), ("lambda", Kind::Complex), ("multiplicity", Kind::Count)]);
    for (k, r) in roots.iter().enumerate() {
        rep.push(vec![
            Cell::Index(k as i64),
            Cell::Complex(r.location, ROOT_TOL * (1.0 + r.location.norm())),
            Cell::Count(r.multiplicity as i64, 0.0),
        ]);
    }
    Ok(rep)
}

fn growth(ctx: &Ctx) -> R<Report> {
    let rmax = ctx.rmax()?;
    let grid = r_grid(rmax);
    let b = inner_of(ctx.op);
    let roots = roots_of(ctx, ctx.bc(), Window::square(rmax * (1.0 + 1e-6)))?;
    let q = ctx.policy.quad_tol;
    let (qi, qo) = (QuadOptions::tol(10.0 * q, q), |r: f64| QuadOptions::tol(100.0 * q * (1.0 + r), 10.0 * q));
    let mut cols = vec![("r", Kind::Real), ("h", Kind::Real), ("T_F", Kind::Real), ("N", Kind::Real)];
    let closed = ctx.inner_spec().ok().map(|s| s.mean_type_b);
    if closed.is_some() {
        cols.push(("h_mean_type", Kind::Real));
    }
    let jac = ctx.jacobi().ok();
    let mut rep = ctx.report(&cols);
    let qh = ctx.quad();
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&r| {
            let h = height_with(&*b, r, &qh)?;
            // For moment problems the polynomial form of T_F is exact and far
            // cheaper than the area integral, whose every ω costs a full recurrence.
            let (t, t_tol) = match jac {
                Some((s, tr)) => {
                    let t = tf_moment(s, r, tr)?;
                    (t, 1e-10 * (1.0 + t.abs()))
                }
                None => {
                    let t = charfn_tf_with(&*b, r, &qi, &qo(r))?;
                    (t, 100.0 * q * (1.0 + r) + 10.0 * q * t.abs())
                }
            };
            let n = counting_function(&roots, r);
            let mut row = vec![
                Cell::Real(r, 0.0),
                Cell::Real(h, q * (1.0 + h.abs())),
                Cell::Real(t, t_tol),
                Cell::Real(n, rt(n)),
            ];
            if let Some(bm) = closed {
                // The exponential factor alone contributes b·r/π to h.
                let v = bm * r / PI;
                row.push(Cell::Real(v, rt(v)));
            }
            Ok(row)
        })
        .collect::<weyl_lab_core::Result<_>>()
        .map_err(|e| ctx.err(e))?;
    rows.into_iter().for_each(|r| rep.push(r));
    Ok(rep)
}

fn defect_cmd(ctx: &Ctx) -> R<Report> {
    let rmax = ctx.rmax()?;
    let grid = r_grid(rmax);
    let bc = ctx.bc();
    let roots = roots_of(ctx, bc, Window::square(rmax * (1.0 + 1e-6)))?;
    let b = inner_of(ctx.op);
    let g = defect(&*b, bc, &grid, Some(&roots)).map_err(|e| ctx.err(e))?;
    let mut rep = ctx.report(&[
        ("r", Kind::Real),
        ("h", Kind::Real),
        ("N", Kind::Real),
        ("m", Kind::Real),
        ("defect_estimate", Kind::Real),
        ("defect_raw", Kind::Real),
    ]);
    // Fixed tolerances of the library's height (1e-12) and proximity (1e-9) quadratures.
    for k in 0..grid.len() {
        let (h, m) = (g.h_values[k], g.m_values[k]);
        let dt = 1e-9 * (1.0 + g.defect_raw.abs()) / g.h_values[grid.len() / 2..].iter().cloned().fold(f64::INFINITY, f64::min).max(1e-300);
        rep.push(vec![
            Cell::Real(grid[k], 0.0),
            Cell::Real(h, 1e-12 * (1.0 + h.abs())),
            Cell::Real(g.n_values[k], rt(g.n_values[k])),
            Cell::Real(m, 1e-9 * (1.0 + m.abs())),
            Cell::Real(g.defect_estimate, dt),
            Cell::Real(g.defect_raw, dt),
        ]);
    }
    Ok(rep)
}

fn kernels(ctx: &Ctx) -> R<Report> {
    let choice = ctx.params.kernel.unwrap_or(KernelChoice::K2);
    let (id, pts): (KernelId, Vec<C>) = match choice {
        KernelChoice::K1 | KernelChoice::K2 | KernelChoice::K3 => {
            let pts = ctx.points((-3.0, 3.0), 6, 1.0)?;
            if let Some(z) = pts.iter().find(|z| !(z.im > 0.0)) {
                return Err(ctx.invalid(format!("kernel points must lie in the upper half-plane, got {z}")));
            }
            let id = [KernelId::K1, KernelId::K2, KernelId::K3][choice as usize];
            (id, pts)
        }
        KernelChoice::K4 => (KernelId::K4, ctx.real_points((-3.0, 3.0), 6)?.into_iter().map(|u| C::new(u, 0.0)).collect()),
        KernelChoice::K5 => {
            let s = ctx.inner_spec()?;
            let w = ctx.window((-10.0, 10.0))?;
            let roots = spectrum(s, BoundaryCondition::real(1.0), Window::real(w.0, w.1)).map_err(|e| ctx.err(e))?;
            (KernelId::K5, roots.iter().map(|r| r.location).collect())
        }
    };
    let m = match id {
        KernelId::K1 | KernelId::K4 => {
            let e = debranges_from_inner(ctx.inner_spec()?).map_err(|e| ctx.err(e))?;
            if id == KernelId::K1 {
                KernelMatrix::build(&pts, id, |l, mu| Ok(kernel_k1(&e, l, mu)))
            } else {
                KernelMatrix::build(&pts, id, |l, mu| kernel_k4(&e, l.re, mu.re).map(|v| C::new(v, 0.0)))
            }
        }
        KernelId::K2 => {
            let b = inner_of(ctx.op);
            KernelMatrix::build(&pts, id, |l, mu| kernel_k2(&*b, l, mu))
        }
        KernelId::K3 => {
            let w = weyl_of(ctx.op);
            KernelMatrix::build(&pts, id, |l, mu| kernel_k3(&*w, l, mu))
        }
        KernelId::K5 => {
            let s = ctx.inner_spec()?;
            KernelMatrix::build(&pts, id, |l, mu| kernel_k5(s, l.re, mu.re).map(|v| C::new(v, 0.0)))
        }
    }
    .map_err(|e| ctx.err(e))?;
    let n = pts.len() as f64;
    let min_eig = if pts.is_empty() { 0.0 } else { m.min_eigenvalue() };
    let scale = m.trace().abs().max(1.0);
    let mut rep = ctx.report(&[
        ("i", Kind::Index),
        ("j", Kind::Index),
        ("lambda_i", Kind::Complex),
        ("lambda_j", Kind::Complex),
        ("K", Kind::Complex),
        ("min_eigenvalue", Kind::Real),
    ]);
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            let k = m.entries[(i, j)];
            rep.push(vec![
                Cell::Index(i as i64),
                Cell::Index(j as i64),
                Cell::Complex(pts[i], 0.0),
                Cell::Complex(pts[j], 0.0),
                Cell::Complex(k, jt(k.norm())),
                Cell::Real(min_eig, 1e-12 * n * scale),
            ]);
        }
    }
    Ok(rep)
}

fn sample(ctx: &Ctx) -> R<Report> {
    let s = ctx.inner_spec()?;
    let pts = ctx.points((-5.0, 5.0), 11, 0.0)?;
    let radius = ctx.policy.caps.sampling_radius;
    let lo = pts.iter().map(|z| z.re).fold(f64::INFINITY, f64::min) - radius - 1.0;
    let hi = pts.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max) + radius + 1.0;
    // Test function: the reproducing kernel of the model space at i.
    let w0 = C::new(0.0, 1.0);
    let f = |z: C| kernel_k2(s, z, w0);
    let nodes = spectrum(s, BoundaryCondition::real(1.0), Window::real(lo, hi)).map_err(|e| ctx.err(e))?;
    let samples: Vec<(f64, C)> = nodes
        .iter()
        .map(|r| f(r.location).map(|v| (r.location.re, v)))
        .collect::<weyl_lab_core::Result<_>>()
        .map_err(|e| ctx.err(e))?;
    let mut rep = ctx.report(&[
        ("lambda", Kind::Complex),
        ("reconstruction", Kind::Complex),
        ("exact", Kind::Complex),
        ("abs_error", Kind::Real),
        ("terms", Kind::Count),
    ]);
    for z in pts {
        let r = sample_reconstruct(s, &samples, z, radius).map_err(|e| ctx.err(e))?;
        let ex = f(z).map_err(|e| ctx.err(e))?;
        let err = (r.value - ex).norm();
        rep.push(vec![
            Cell::Complex(z, 0.0),
            Cell::Complex(r.value, r.tail_bound + jt(r.value.norm())),
            Cell::Complex(ex, jt(ex.norm())),
            Cell::Real(err, r.tail_bound + jt(ex.norm())),
            Cell::Count(r.terms as i64, 0.0),
        ]);
    }
    Ok(rep)
}

fn completeness(ctx: &Ctx) -> R<Report> {
    let mut rep = ctx.report(&[
        ("complete", Kind::Text),
        ("basis", Kind::Text),
        ("mean_type_estimate", Kind::Real),
        ("points_used", Kind::Count),
        ("shortened", Kind::Text),
        ("blaschke_sum", Kind::Real),
        ("sector_sum", Kind::Real),
        ("sector_last_decade", Kind::Real),
    ]);
    let delta = ctx.params.delta.unwrap_or(0.1);
    match ctx.op {
        Operator::Inner(s) => {
            let c = is_complete(s).map_err(|e| ctx.err(e))?;
            let zs: Vec<C> = s.zeros.iter().map(|z| z.location).collect();
            let sec = sector_summability(&zs, delta).map_err(|e| ctx.err(e))?;
            let e = &c.estimate;
            let bs = s.blaschke_sum();
            rep.push(vec![
                Cell::Text(c.complete.to_string()),
                Cell::Text("exact".into()),
                Cell::Real(e.estimate, e.rms_residual),
                Cell::Count(e.points_used as i64, 0.0),
                Cell::Text(e.shortened.to_string()),
                Cell::Real(bs, rt(bs)),
                Cell::Real(sec.sum, rt(sec.sum)),
                Cell::Real(sec.last_decade_increment, rt(sec.last_decade_increment)),
            ]);
        }
        op => {
            let b = inner_of(op);
            let e = mean_type_estimate(&*b, &default_y_grid()).map_err(|e| ctx.err(e))?;
            // Without an exact mean type the verdict rests on the regression.
            let complete = e.estimate.abs() <= 10.0 * e.rms_residual + 1e-6;
            rep.push(vec![
                Cell::Text(complete.to_string()),
                Cell::Text("regression".into()),
                Cell::Real(e.estimate, e.rms_residual),
                Cell::Count(e.points_used as i64, 0.0),
                Cell::Text(e.shortened.to_string()),
                Cell::Real(f64::NAN, 0.0),
                Cell::Real(f64::NAN, 0.0),
                Cell::Real(f64::NAN, 0.0),
            ]);
        }
    }
    Ok(rep)
}

fn riesz(ctx: &Ctx) -> R<Report> {
    let s = ctx.inner_spec()?;
    // Eigenvalues of T_∞ are the poles of B, the reflected zeros.
    let eig: Vec<C> = s.zeros.iter().map(|z| z.location.conj()).collect();
    if eig.is_empty() {
        return Err(ctx.invalid("B has no zeros, so T_inf has no eigenvalues"));
    }
    let d = riesz_diagnostic(&eig).map_err(|e| ctx.err(e))?;
    let bo = Biorthogonal::new(&eig).map_err(|e| ctx.err(e))?;
    let verdict = match d.verdict {
        RieszVerdict::LikelyRiesz => "likely-riesz",
        RieszVerdict::LikelyNot => "likely-not",
        RieszVerdict::Inconclusive => "inconclusive",
    };
    let n = eig.len() as f64;
    let mut rep = ctx.report(&[
        ("index", Kind::Index),
        ("lambda", Kind::Complex),
        ("partial_product", Kind::Real),
        ("dual_norm", Kind::Real),
        ("min_partial", Kind::Real),
        ("min_partial_half", Kind::Real),
        ("separation_delta", Kind::Real),
        ("verdict", Kind::Text),
    ]);
    for (j, &l) in eig.iter().enumerate() {
        let p = d.partial_products[j];
        let dn = bo.f_tilde_norm(j);
        rep.push(vec![
            Cell::Index(j as i64),
            Cell::Complex(l, 0.0),
            Cell::Real(p, n * rt(p)),
            Cell::Real(dn, n * rt(dn)),
            Cell::Real(d.min_partial, n * rt(d.min_partial)),
            Cell::Real(d.min_partial_half, n * rt(d.min_partial_half)),
            Cell::Real(d.separation_delta, rt(d.separation_delta)),
            Cell::Text(verdict.into()),
        ]);
    }
    Ok(rep)
}

fn moment_matrix(ctx: &Ctx) -> R<Report> {
    let (s, tr) = ctx.jacobi()?;
    let pts = ctx.points((-5.0, 5.0), 11, 0.0)?;
    let mut rep = ctx.report(&[
        ("lambda", Kind::Complex),
        ("A", Kind::Complex),
        ("B", Kind::Complex),
        ("C", Kind::Complex),
        ("D", Kind::Complex),
        ("det", Kind::Complex),
        ("truncation_n", Kind::Index),
    ]);
    let rows: Vec<Vec<Cell>> = pts
        .par_iter()
        .map(|&z| {
            let m = nevanlinna_entries(s, z, tr)?;
            let tol = |v: C| m.tail_estimate + jt(v.norm());
            let scale = m.a_val.norm() * m.d_val.norm() + m.b_val.norm() * m.c_val.norm();
            Ok(vec![
                Cell::Complex(z, 0.0),
                Cell::Complex(m.a_val, tol(m.a_val)),
                Cell::Complex(m.b_val, tol(m.b_val)),
                Cell::Complex(m.c_val, tol(m.c_val)),
                Cell::Complex(m.d_val, tol(m.d_val)),
                Cell::Complex(m.det(), jt(scale)),
                Cell::Index(m.truncation_n as i64),
            ])
        })
        .collect::<weyl_lab_core::Result<_>>()
        .map_err(|e| ctx.err(e))?;
    rows.into_iter().for_each(|r| rep.push(r));
    Ok(rep)
}

fn moment_spectrum(ctx: &Ctx) -> R<Report> {
    let (s, tr) = ctx.jacobi()?;
    let t = ctx.tparam(0.0)?;
    let w = match ctx.params.window {
        Some(_) => ctx.window((0.0, 1.0))?,
        None => default_window(s, tr).map_err(|e| ctx.err(e))?,
    };
    let atoms = von_neumann_measure(s, t, w, tr).map_err(|e| ctx.err(e))?;
    let mut rep = ctx.report(&[("index", Kind::Index), ("x", Kind::Real), ("mass", Kind::Real)]);
    for (k, (x, m)) in atoms.into_iter().enumerate() {
        rep.push(vec![Cell::Index(k as i64), Cell::Real(x, ROOT_TOL * (1.0 + x.abs())), Cell::Real(m, 1e-10 * m.abs() + f64::MIN_POSITIVE)]);
    }
    Ok(rep)
}

fn moment_growth(ctx: &Ctx) -> R<Report> {
    let (s, tr) = ctx.jacobi()?;
    let t = ctx.tparam(0.0)?;
    let rmax = ctx.rmax()?;
    let grid = r_grid(rmax);
    let b = inner_of(ctx.op);
    let qh = ctx.quad();
    let q = ctx.policy.quad_tol;
    let edge = rmax * (1.0 + 1e-6);
    let roots: Vec<Root> = von_neumann_spectrum(s, t, (-edge, edge), tr)
        .map_err(|e| ctx.err(e))?
        .into_iter()
        .map(|x| Root { location: C::new(x, 0.0), multiplicity: 1 })
        .collect();
    let mut rep = ctx.report(&[("r", Kind::Real), ("T_F", Kind::Real), ("h", Kind::Real), ("ln_P_ir", Kind::Real), ("N", Kind::Real)]);
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&r| {
            let tf = tf_moment(s, r, tr)?;
            let h = height_with(&*b, r, &qh)?;
            let p = p_norm(s, C::new(0.0, r), tr)?;
            let lp = p.value.ln();
            Ok(vec![
                Cell::Real(r, 0.0),
                Cell::Real(tf, 1e-10 * (1.0 + tf.abs())),
                Cell::Real(h, q * (1.0 + h.abs())),
                Cell::Real(lp, 0.5 * p.tail_estimate / (p.value * p.value) + rt(lp)),
                Cell::Real(counting_function(&roots, r), rt(counting_function(&roots, r))),
            ])
        })
        .collect::<weyl_lab_core::Result<_>>()
        .map_err(|e| ctx.err(e))?;
    rows.into_iter().for_each(|r| rep.push(r));
    Ok(rep)
}

struct Check {
    name: &'static str,
    /// Nonnegative defect; zero is ideal.
    defect: f64,
    threshold: f64,
}

fn upper_points() -> Vec<C> {
    let mut v = vec![];
    for y in [0.25, 1.0, 3.0] {
        for u in [-3.0, -1.0, 0.0, 0.5, 2.0] {
            v.push(C::new(u, y));
        }
    }
    v
}

fn inner_checks(b: &dyn InnerEvaluator, m: &dyn HerglotzEvaluator, eps: f64) -> weyl_lab_core::Result<Vec<Check>> {
    let up = upper_points();
    // Offset so that no sample lands on a pole of a rational M.
    let axis: Vec<f64> = linspace(-3.0, 3.0, 13).into_iter().map(|u| u + 0.0371).collect();
    let mut reflection: f64 = 0.0;
    let mut contractive: f64 = 0.0;
    let mut roundtrip: f64 = 0.0;
    let mut herglotz: f64 = 0.0;
    let mut curv: f64 = 0.0;
    let back = herglotz_to_inner(cayley_to_weyl(b));
    for &z in &up {
        let bz = b.value(z)?;
        let bl = b.eval_proj(z.conj());
        if !bl.is_infinite() {
            reflection = reflection.max((bl.value(z.conj())? * bz.conj() - 1.0).norm());
        }
        contractive = contractive.max(bz.norm() - 1.0);
        roundtrip = roundtrip.max((back.value(z)? - bz).norm());
        let mz = m.eval(z)?;
        herglotz = herglotz.max(-mz.im / (1.0 + mz.norm()));
        curv = curv.max(-omega_with(b, z, eps)?);
    }
    let mut unimodular: f64 = 0.0;
    let mut fd: f64 = 0.0;
    let h = 1e-4;
    for &u in &axis {
        unimodular = unimodular.max((b.value(C::new(u, 0.0))?.norm() - 1.0).abs());
        let j = b.phase_jet(u)?;
        let q = b.value(C::new(u + h, 0.0))? / b.value(C::new(u - h, 0.0))?;
        fd = fd.max((q.arg() / (2.0 * h) - j[0]).abs() / (1.0 + j[0].abs() + j[2].abs()));
        curv = curv.max(-omega_with(b, C::new(u, 0.0), eps)?);
    }
    let gram = KernelMatrix::build(&up[5..11], KernelId::K2, |l, mu| kernel_k2(b, l, mu))?;
    let psd = (-gram.min_eigenvalue()).max(0.0) / gram.trace().abs().max(1.0);
    Ok(vec![
        Check { name: "reflection", defect: reflection, threshold: 1e-10 },
        Check { name: "contractive", defect: contractive.max(0.0), threshold: 1e-12 },
        Check { name: "unimodular", defect: unimodular, threshold: 1e-12 },
        Check { name: "phase-derivative", defect: fd, threshold: 1e-6 },
        Check { name: "curvature-nonnegative", defect: curv.max(0.0), threshold: 1e-10 },
        Check { name: "herglotz", defect: herglotz.max(0.0), threshold: 1e-12 },
        Check { name: "cayley-roundtrip", defect: roundtrip, threshold: 1e-10 },
        Check { name: "gram-psd", defect: psd, threshold: 1e-10 },
    ])
}

fn jacobi_checks(s: &JacobiSpec, tr: Truncation) -> weyl_lab_core::Result<Vec<Check>> {
    let mut det: f64 = 0.0;
    for k in 0..24 {
        let z = C::from_polar(0.5 + 0.2 * k as f64, 0.7 * k as f64);
        let m = nevanlinna_entries(s, z, tr)?;
        let scale = 1.0 + m.a_val.norm() * m.d_val.norm() + m.b_val.norm() * m.c_val.norm();
        det = det.max((m.det() - 1.0).norm() / scale);
    }
    let n = s.n_max();
    let mut wr: f64 = 0.0;
    for k in [0, 1, n / 2, n - 2] {
        for z in [C::new(0.3, 0.0), C::new(-1.0, 2.0), C::new(4.0, 0.5)] {
            let w = wronskian(s, k, z)?;
            let p = |i| weyl_lab_core::moment::poly_first(s, i, z);
            let q = |i| weyl_lab_core::moment::poly_second(s, i, z);
            let scale = 1.0 + s.a[k] * ((p(k)? * q(k + 1)?).norm() + (p(k + 1)? * q(k)?).norm());
            wr = wr.max((w - 1.0).norm() / scale);
        }
    }
    let win = default_window(s, tr)?;
    // Alternation holds on any interval, and a bounded one keeps the scan fine enough.
    let near = (win.0.max(-100.0), win.1.min(100.0));
    let zb = von_neumann_spectrum(s, TParam::real(0.0), near, tr)?;
    let zd = von_neumann_spectrum(s, TParam::Infinity, near, tr)?;
    let mut all: Vec<(f64, u8)> = zb.iter().map(|&x| (x, 0)).chain(zd.iter().map(|&x| (x, 1))).collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut violations = all.windows(2).filter(|p| p[0].1 == p[1].1).count();
    if zb.is_empty() || zd.is_empty() {
        violations += 1;
    }
    let atoms = von_neumann_measure(s, TParam::real(0.0), win, tr)?;
    // The section's t-quadrature is exact through degree 2N − 3 for every t.
    let mut mom: f64 = 0.0;
    for i in 0..=4.min(2 * n - 3) {
        let lhs: f64 = atoms.iter().map(|(x, m)| m * x.powi(i as i32)).sum();
        let rhs = moments_from_jacobi(s, i)?;
        mom = mom.max((lhs - rhs).abs() / rhs.abs().max(1.0));
    }
    let mut ped: f64 = 0.0;
    if n >= 3 {
        for z in [C::new(0.5, 0.0), C::new(-2.0, 1.0), C::new(3.0, -4.0)] {
            let p = shift_and_pedersen(s, z, tr)?;
            ped = ped.max(p.mismatch).max(p.c_mismatch);
        }
    }
    let b = JacobiInner { spec: s.clone(), trunc: tr };
    let mut routes: f64 = 0.0;
    let mut bound: f64 = 0.0;
    for u in linspace(-3.0, 3.0, 25) {
        let w = curvature_from_polys(s, u, tr)?;
        let wb = omega_with(&b, C::new(u, 0.0), 1e-3)?;
        routes = routes.max((w - wb).abs() / (1.0 + w.abs()));
        bound = bound.max((w - curvature_bound_from_polys(s, u, tr)?) / (1.0 + w.abs()));
    }
    Ok(vec![
        Check { name: "det-N", defect: det, threshold: 1e-8 },
        Check { name: "wronskian", defect: wr, threshold: 1e-10 },
        Check { name: "interlacing", defect: violations as f64, threshold: 0.0 },
        Check { name: "moments", defect: mom, threshold: 1e-6 },
        Check { name: "pedersen", defect: ped, threshold: 1e-8 },
        Check { name: "curvature-routes", defect: routes, threshold: 1e-6 },
        Check { name: "curvature-bound", defect: bound.max(0.0), threshold: 1e-12 },
    ])
}

fn verify(ctx: &Ctx) -> R<(Report, usize)> {
    let b = inner_of(ctx.op);
    let m = weyl_of(ctx.op);
    let mut checks = inner_checks(&*b, &*m, ctx.policy.axis_epsilon).map_err(|e| ctx.err(e))?;
    if let Operator::Jacobi { spec, trunc } = ctx.op {
        checks.extend(jacobi_checks(spec, *trunc).map_err(|e| ctx.err(e))?);
    }
    if let Operator::Inner(s) = ctx.op {
        // Eigenvalues of T_1 must sit where θ ≡ 0 (mod 2π).
        let roots = spectrum(s, BoundaryCondition::real(1.0), Window::real(-10.0, 10.0)).map_err(|e| ctx.err(e))?;
        let res = roots
            .iter()
            .map(|r| {
                let t = s.theta(r.location.re);
                (t - 2.0 * PI * (t / (2.0 * PI)).round()).abs()
            })
            .fold(0.0, f64::max);
        checks.push(Check { name: "spectrum-phase", defect: res, threshold: 1e-9 });
    }
    let mut rep = ctx.report(&[("check", Kind::Text), ("defect", Kind::Real), ("verdict", Kind::Text)]);
    let mut failures = 0;
    for c in checks {
        let pass = c.defect <= c.threshold;
        failures += usize::from(!pass);
        rep.push(vec![Cell::Text(c.name.into()), Cell::Real(c.defect, c.threshold), Cell::Text(if pass { "PASS" } else { "FAIL" }.into())]);
    }
    Ok((rep, failures))
}
