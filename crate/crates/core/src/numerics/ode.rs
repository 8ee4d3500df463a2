//! Dormand-Prince 5(4) with cubic Hermite dense output.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth minus fourth order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_step: f64::INFINITY, max_steps: 2_000_000 }
    }
}

/// Accepted steps in increasing `t`, with derivatives for Hermite interpolation.
/// Interpolation error scales like h⁴, so cap `max_step` when dense values matter.
#[derive(Debug, Clone)]
pub struct OdeSolution<const N: usize> {
    pub ts: Vec<f64>,
    pub ys: Vec<[f64; N]>,
    pub fs: Vec<[f64; N]>,
}

impl<const N: usize> OdeSolution<N> {
    pub fn t_min(&self) -> f64 {
        self.ts[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    /// Dense output. Arguments outside the integrated span are clamped.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let n = self.ts.len();
        if n == 1 || t <= self.ts[0] {
            return self.ys[0];
        }
        if t >= self.ts[n - 1] {
            return self.ys[n - 1];
        }
        let k = self.ts.partition_point(|&s| s <= t).clamp(1, n - 1);
        let (t0, t1) = (self.ts[k - 1], self.ts[k]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        std::array::from_fn(|i| h00 * self.ys[k - 1][i] + h10 * h * self.fs[k - 1][i] + h01 * self.ys[k][i] + h11 * h * self.fs[k][i])
    }

    /// Derivative of the dense output.
    pub fn eval_derivative(&self, t: f64) -> [f64; N] {
        let n = self.ts.len();
        if n == 1 {
            return self.fs[0];
        }
        let k = self.ts.partition_point(|&s| s <= t).clamp(1, n - 1);
        let (t0, t1) = (self.ts[k - 1], self.ts[k]);
        let h = t1 - t0;
        let s = ((t - t0) / h).clamp(0.0, 1.0);
        let d00 = 6.0 * s * (s - 1.0) / h;
        let d10 = (1.0 - s) * (1.0 - 3.0 * s);
        let d01 = -d00;
        let d11 = s * (3.0 * s - 2.0);
        std::array::from_fn(|i| d00 * self.ys[k - 1][i] + d10 * self.fs[k - 1][i] + d01 * self.ys[k][i] + d11 * self.fs[k][i])
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction).
/// `guard` runs on every accepted state and may abort the integration.
pub fn dopri<const N: usize, F, G>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &OdeOptions,
    mut guard: G,
) -> Result<OdeSolution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    G: FnMut(f64, &[f64; N]) -> Result<()>,
{
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let mut ts = vec![t0];
    let mut ys = vec![y0];
    let mut k1 = f(t0, &y0);
    let mut fs = vec![k1];
    if span == 0.0 {
        return Ok(OdeSolution { ts, ys, fs });
    }
    let mut t = t0;
    let mut y = y0;
    let mut h = (span * 1e-3).min(opts.max_step).min(1e-2);
    let mut steps = 0;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StepUnderflow { at: t });
        }
        if h > (t1 - t).abs() {
            h = (t1 - t).abs();
        }
        let hs = dir * h;
        let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * hs, &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + hs, &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + hs, &y_new);
        let mut err: f64 = 0.0;
        for i in 0..N {
            let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            h *= 0.2;
            if h < 1e-14 * span.max(1.0) {
                return Err(Error::StepUnderflow { at: t });
            }
            continue;
        }
        if err <= 1.0 {
            t = if (t1 - (t + hs)) * dir <= 0.0 { t1 } else { t + hs };
            y = y_new;
            k1 = k7;
            guard(t, &y)?;
            ts.push(t);
            ys.push(y);
            fs.push(k1);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(opts.max_step);
        if h < 1e-14 * span.max(1.0) {
            return Err(Error::StepUnderflow { at: t });
        }
    }
    if dir < 0.0 {
        ts.reverse();
        ys.reverse();
        fs.reverse();
    }
    Ok(OdeSolution { ts, ys, fs })
}
