//! Mean type, completeness of extensions, and Riesz-basis diagnostics.

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::inner::{InnerEvaluator, InnerFunctionSpec};
use crate::numerics::quad::{integrate_line, QuadOptions};
use crate::numerics::fit_line;

/// `ln(1e−300)`: below this `|B(iy)|` the grid is cut short.
const LN_UNDERFLOW: f64 = -690.775_527_898_213_7;

#[derive(Debug, Clone, PartialEq)]
pub struct MeanTypeEstimate {
    pub estimate: f64,
    pub points_used: usize,
    /// The grid was cut where `|B(iy)|` fell below 1e−300.
    pub shortened: bool,
    pub rms_residual: f64,
}

/// Default regression grid: 64 geometric points on `[10, 10⁴]`.
pub fn default_y_grid() -> Vec<f64> {
    (0..64).map(|k| 10.0 * 1000f64.powf(k as f64 / 63.0)).collect()
}

/// `−slope` of `ln|B(iy)|` against `y`.
pub fn mean_type_estimate<E: InnerEvaluator + ?Sized>(b: &E, y_grid: &[f64]) -> Result<MeanTypeEstimate> {
    let (y0, y1) = match (y_grid.first(), y_grid.last()) {
        (Some(&a), Some(&b)) if a > 0.0 => (a, b),
        _ => return Err(Error::Validation("y grid must be nonempty and positive".into())),
    };
    if y1 / y0 < 100.0 * (1.0 - 1e-12) {
        return Err(Error::Validation(format!("y grid spans {:.3} < 100", y1 / y0)));
    }
    let mut ys = Vec::with_capacity(y_grid.len());
    let mut ls = Vec::with_capacity(y_grid.len());
    let mut shortened = false;
    for &y in y_grid {
        let l = b.ln_abs(C::new(0.0, y));
        if l < LN_UNDERFLOW {
            shortened = true;
            break;
        }
        ys.push(y);
        ls.push(l);
    }
    if ys.len() < 3 {
        return Err(Error::Underflow { at: ys.last().copied().unwrap_or(y0) });
    }
    let fit = fit_line(&ys, &ls)?;
    Ok(MeanTypeEstimate { estimate: -fit.slope, points_used: ys.len(), shortened, rms_residual: fit.rms_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessReport {
    pub complete: bool,
    pub estimate: MeanTypeEstimate,
}

/// `T₀` (eigenvalues the zeros of `B`) is complete exactly when the mean type vanishes.
pub fn is_complete(spec: &InnerFunctionSpec) -> Result<CompletenessReport> {
    let estimate = mean_type_estimate(spec, &default_y_grid())?;
    Ok(CompletenessReport { complete: spec.mean_type_b == 0.0, estimate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RieszVerdict {
    LikelyRiesz,
    LikelyNot,
    /// Too few eigenvalues to compare truncations.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RieszDiagnostic {
    pub zeros: Vec<C>,
    /// `|B_j(λ̄_j)| = Π_{k≠j} |(λ̄_j − λ̄_k)/(λ̄_j − λ_k)|`.
    pub partial_products: Vec<f64>,
    pub min_partial: f64,
    /// `min_{k≠j} |(λ̄_j − λ̄_k)/(λ̄_j − λ_k)|`.
    pub separation_delta: f64,
    /// `min_partial` over the first half of the list.
    pub min_partial_half: f64,
    pub verdict: RieszVerdict,
}

fn partials(zeros: &[C]) -> (Vec<f64>, f64) {
    let mut delta: f64 = 1.0;
    let p = zeros
        .iter()
        .enumerate()
        .map(|(j, &lj)| {
            let w = lj.conj();
            let mut s = 0.0;
            for (k, &lk) in zeros.iter().enumerate() {
                if k != j {
                    let f = ((w - lk.conj()) / (w - lk)).norm();
                    delta = delta.min(f);
                    s += f.ln();
                }
            }
            s.exp()
        })
        .collect();
    (p, delta)
}

/// Finite-section surrogate of the interpolation condition `inf_j |B_j(λ̄_j)| > 0`
/// for eigenvalues of `T_∞` in ℂ₋. The verdict compares the full list with its first half.
pub fn riesz_diagnostic(zeros: &[C]) -> Result<RieszDiagnostic> {
    if zeros.iter().any(|z| !(z.im < 0.0)) {
        return Err(Error::Validation("eigenvalues must lie in the lower half-plane".into()));
    }
    for (j, a) in zeros.iter().enumerate() {
        if zeros[..j].contains(a) {
            return Err(Error::DuplicateEigenvalue { at: *a });
        }
    }
    let (partial_products, separation_delta) = partials(zeros);
    let min_partial = partial_products.iter().cloned().fold(1.0, f64::min);
    let half = zeros.len().div_ceil(2);
    let min_partial_half = partials(&zeros[..half]).0.into_iter().fold(1.0, f64::min);
    let verdict = if zeros.len() < 4 {
        RieszVerdict::Inconclusive
    } else if min_partial >= 0.9 * min_partial_half && min_partial > 1e-8 {
        RieszVerdict::LikelyRiesz
    } else {
        RieszVerdict::LikelyNot
    };
    Ok(RieszDiagnostic { zeros: zeros.to_vec(), partial_products, min_partial, separation_delta, min_partial_half, verdict })
}

/// The eigenvector system `f_j(u) = √(2y_j)/(u − λ_j)`, `y_j = −Im λ_j`,
/// and its biorthogonal partner `f̃_j = √(2y_j) B_j(u)/(B_j(λ̄_j)(u − λ_j))`.
#[derive(Debug, Clone)]
pub struct Biorthogonal {
    pub zeros: Vec<C>,
}

impl Biorthogonal {
    pub fn new(zeros: &[C]) -> Result<Self> {
        riesz_diagnostic(zeros)?;
        Ok(Self { zeros: zeros.to_vec() })
    }

    /// Blaschke product over `λ̄_k`, `k ≠ j`.
    fn b_omit(&self, j: usize, u: C) -> C {
        let mut p = C::new(1.0, 0.0);
        for (k, &l) in self.zeros.iter().enumerate() {
            if k != j {
                p *= (u - l.conj()) / (u - l);
            }
        }
        p
    }

    pub fn f(&self, j: usize, u: f64) -> C {
        let l = self.zeros[j];
        (-2.0 * l.im).sqrt() / (C::new(u, 0.0) - l)
    }

    pub fn f_tilde(&self, j: usize, u: f64) -> C {
        let l = self.zeros[j];
        let z = C::new(u, 0.0);
        (-2.0 * l.im).sqrt() * self.b_omit(j, z) / (self.b_omit(j, l.conj()) * (z - l))
    }

    /// `‖f̃_j‖ = 1/|B_j(λ̄_j)|`.
    pub fn f_tilde_norm(&self, j: usize) -> f64 {
        1.0 / self.b_omit(j, self.zeros[j].conj()).norm()
    }

    /// `∫ f̃_k conj f_j du/2π`, which should be `δ_{jk}`.
    pub fn pairing(&self, k: usize, j: usize) -> Result<C> {
        let scale = self.zeros.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let opts = QuadOptions::tol(1e-10, 1e-10);
        let re = integrate_line(|u| (self.f_tilde(k, u) * self.f(j, u).conj()).re, 0.0, scale, &opts)?;
        let im = integrate_line(|u| (self.f_tilde(k, u) * self.f(j, u).conj()).im, 0.0, scale, &opts)?;
        Ok(C::new(re.value, im.value) / (2.0 * PI))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorSum {
    pub sum: f64,
    /// Contribution of the zeros with `|λ|` in the last decade.
    pub last_decade_increment: f64,
    pub count: usize,
}

/// `Σ 1/|λ|` over zeros with `arg λ ∈ (δ, π − δ)`.
pub fn sector_summability(zeros: &[C], delta: f64) -> Result<SectorSum> {
    if !(delta > 0.0 && delta < 0.5 * PI) {
        return Err(Error::Validation("sector angle must lie in (0, π/2)".into()));
    }
    let inside: Vec<f64> = zeros
        .iter()
        .filter(|z| {
            let a = z.arg();
            a > delta && a < PI - delta
        })
        .map(|z| z.norm())
        .collect();
    let rmax = inside.iter().cloned().fold(0.0, f64::max);
    let sum = inside.iter().map(|r| 1.0 / r).sum();
    let last = inside.iter().filter(|&&r| r > rmax / 10.0).map(|r| 1.0 / r).sum();
    Ok(SectorSum { sum, last_decade_increment: last, count: inside.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::Zero;
    use crate::numerics::geomspace;

    fn spec(b: f64, zeros: &[C]) -> InnerFunctionSpec {
        InnerFunctionSpec::new(C::new(1.0, 0.0), b, zeros.iter().map(|&z| Zero::simple(z)).collect()).unwrap()
    }

    #[test]
    fn mean_type_examples() {
        let y = geomspace(10.0, 1000.0, 16);
        let one = mean_type_estimate(&spec(1.0, &[C::new(0.0, 1.0)]), &y).unwrap();
        assert!((one.estimate - 1.0).abs() < 0.01);
        let zero = mean_type_estimate(&spec(0.0, &[C::new(0.0, 1.0), C::new(1.0, 2.0)]), &y).unwrap();
        assert!(zero.estimate.abs() < 0.01);
        let three = mean_type_estimate(&spec(3.0, &[]), &y).unwrap();
        assert!((three.estimate - 3.0).abs() < 0.01);
        assert!(three.shortened);
        assert!(matches!(mean_type_estimate(&spec(1.0, &[]), &[1.0, 10.0]), Err(Error::Validation(_))));
    }

    #[test]
    fn completeness_examples() {
        assert!(is_complete(&spec(0.0, &[C::new(0.5, 2.0)])).unwrap().complete);
        assert!(!is_complete(&spec(1.0, &[])).unwrap().complete);
        assert!(!is_complete(&spec(1.0, &[C::new(0.0, 1.0)])).unwrap().complete);
    }

    #[test]
    fn two_zero_partials() {
        let z = [C::new(0.0, -1.0), C::new(1.0, -1.0)];
        let d = riesz_diagnostic(&z).unwrap();
        for p in &d.partial_products {
            assert!((p - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        }
        let bo = Biorthogonal::new(&z).unwrap();
        assert!((bo.f_tilde_norm(0) - 5f64.sqrt()).abs() < 1e-14);
        assert!(matches!(riesz_diagnostic(&[z[0], z[0]]), Err(Error::DuplicateEigenvalue { .. })));
    }

    #[test]
    fn sector_examples() {
        let sq: Vec<C> = (1..=100).map(|j| C::new(0.0, (j * j) as f64)).collect();
        let s = sector_summability(&sq, PI / 4.0).unwrap();
        assert!(s.sum < PI * PI / 6.0 && s.sum > 1.63);
        let flat: Vec<C> = (1..=100).map(|j| C::new(j as f64, 0.01)).collect();
        assert_eq!(sector_summability(&flat, PI / 4.0).unwrap().sum, 0.0);
        assert_eq!(sector_summability(&[C::new(0.0, 1.0)], PI / 4.0).unwrap().sum, 1.0);
    }
}
