use crate::error::{Error, Result};

/// Bisection on a sign-changing bracket, to absolute width `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn scan<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, step: f64) -> Vec<(f64, f64)> {
    let n = ((b - a) / step).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    let mut x0 = a;
    let mut f0 = f(x0);
    for k in 1..=n {
        let x1 = if k == n { b } else { a + (b - a) * k as f64 / n as f64 };
        let f1 = f(x1);
        if f0 == 0.0 {
            out.push((x0, x0));
        } else if f1 != 0.0 && (f0 > 0.0) != (f1 > 0.0) {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        out.push((x0, x0));
    }
    out
}

/// Real roots of `f` in `[a, b]` by sign scan and bisection. The scan is
/// refined twice; if the number of sign changes keeps moving the roots are
/// too close for the step and `ScanResolution` is returned.
pub fn real_roots<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, step: f64, tol: f64) -> Result<Vec<f64>> {
    let mut h = step;
    let mut brackets = scan(&mut f, a, b, h);
    let mut settled = false;
    for _ in 0..2 {
        h *= 0.25;
        let finer = scan(&mut f, a, b, h);
        if finer.len() == brackets.len() {
            settled = true;
            break;
        }
        brackets = finer;
    }
    if !settled {
        let near = brackets.first().map(|p| p.0).unwrap_or(a);
        return Err(Error::ScanResolution { near });
    }
    let mut roots: Vec<f64> = brackets
        .into_iter()
        .map(|(x0, x1)| if x0 == x1 { x0 } else { bisect(&mut f, x0, x1, tol) })
        .collect();
    roots.dedup_by(|x, y| (*x - *y).abs() <= tol);
    Ok(roots)
}
