//! Globally adaptive Gauss-Kronrod (21-point) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_686_251_883,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_intervals: 4000 }
    }
}

impl QuadOptions {
    pub fn tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = WGK[10] * fc;
    let mut rg = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv1[j] = f1;
        fv2[j] = f2;
        rk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            rg += WG[j / 2] * (f1 + f2);
        }
    }
    // QUADPACK error heuristic.
    let mean = 0.5 * rk;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let asc = asc * h.abs();
    let mut err = ((rk - rg) * h).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    (rk * h, err.max(50.0 * f64::EPSILON * (rk * h).abs()))
}

/// Integrates `f` over `[a, b]`, starting from a uniform split into `pieces`.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    pieces: usize,
    opts: &QuadOptions,
) -> Result<Quad> {
    let n = pieces.max(1);
    let mut breaks = Vec::with_capacity(n + 1);
    for k in 0..=n {
        breaks.push(a + (b - a) * k as f64 / n as f64);
    }
    integrate_breaks(&mut f, &breaks, opts)
}

pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Quad> {
    integrate_pieces(f, a, b, 1, opts)
}

/// Integrates over consecutive intervals `[breaks[k], breaks[k+1]]`.
/// The interval budget counts refinements on top of the initial partition.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(f: &mut F, breaks: &[f64], opts: &QuadOptions) -> Result<Quad> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (v, e) = gk21(f, w[0], w[1]);
        total += v;
        total_err += e;
        heap.push(Piece { a: w[0], b: w[1], value: v, error: e });
    }
    let budget = opts.max_intervals + heap.len();
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::QuadratureFailure { value: total, error: total_err });
        }
        if total_err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(Quad { value: total, error: total_err });
        }
        if heap.len() >= budget {
            return Err(Error::QuadratureFailure { value: total, error: total_err });
        }
        let Some(worst) = heap.pop() else {
            return Ok(Quad { value: total, error: total_err });
        };
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a.min(worst.b) || m >= worst.a.max(worst.b) {
            // Interval cannot be split further in double precision.
            return Err(Error::QuadratureFailure { value: total, error: total_err });
        }
        let (v1, e1) = gk21(f, worst.a, m);
        let (v2, e2) = gk21(f, m, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Piece { a: worst.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: worst.b, value: v2, error: e2 });
        // Guard against drift in the running sums.
        if heap.len() % 256 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
}

/// Integral over the whole real line through `u = center + scale * tan(t)`.
pub fn integrate_line<F: FnMut(f64) -> f64>(mut f: F, center: f64, scale: f64, opts: &QuadOptions) -> Result<Quad> {
    let half = std::f64::consts::FRAC_PI_2;
    let g = |t: f64| {
        let (s, c) = t.sin_cos();
        let sec2 = 1.0 / (c * c);
        f(center + scale * s / c) * scale * sec2
    };
    integrate_pieces(g, -half, half, 8, opts)
}

/// `∫_0^r g(u) ln(r/u) du` with the logarithmic endpoint singularity removed by `u = r t²`.
pub fn integrate_log_weight<F: FnMut(f64) -> f64>(mut g: F, r: f64, pieces: usize, opts: &QuadOptions) -> Result<Quad> {
    let h = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        -4.0 * r * t * t.ln() * g(r * t * t)
    };
    // Pieces are spread evenly in u, so break points sit at sqrt(k/n).
    let n = pieces.max(1);
    let breaks: Vec<f64> = (0..=n).map(|k| (k as f64 / n as f64).sqrt()).collect();
    let mut h = h;
    integrate_breaks(&mut h, &breaks, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, &QuadOptions::default()).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0) + 3.0;
        assert!((q.value - exact).abs() < 1e-13);
    }

    #[test]
    fn log_weight_of_constant() {
        // ∫_0^r ln(r/u) du = r
        let q = integrate_log_weight(|_| 1.0, 7.0, 1, &QuadOptions::tol(1e-13, 1e-13)).unwrap();
        assert!((q.value - 7.0).abs() < 1e-11, "{}", q.value);
    }

    #[test]
    fn lorentzian_line() {
        let q = integrate_line(|u| 1.0 / (1.0 + u * u), 0.0, 1.0, &QuadOptions::tol(1e-13, 1e-13)).unwrap();
        assert!((q.value - std::f64::consts::PI).abs() < 1e-11);
    }

    #[test]
    fn catalan() {
        // ∫_0^1 -ln(u)/(1+u²) du = Catalan's constant
        let q = integrate_log_weight(|u| 1.0 / (1.0 + u * u), 1.0, 1, &QuadOptions::tol(1e-13, 1e-13)).unwrap();
        assert!((q.value - 0.915_965_594_177_219_015).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 0.0, max_intervals: 4 };
        let r = integrate(|x| (1.0 / x).sin(), 1e-4, 1.0, &opts);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
