//! Bracketed scalar root finding: Brent's method and a safeguarded Newton.

use crate::error::{Error, Result};

/// Brent's method on a bracketing interval `[a, b]` with `f(a) f(b) <= 0`.
pub fn brent<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64, max_iter: usize) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::Numerical(format!(
            "brent: interval [{a}, {b}] does not bracket a root (f(a)={fa:.3e}, f(b)={fb:.3e})"
        )));
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;

    for _ in 0..max_iter {
        if fb == 0.0 || (b - a).abs() <= xtol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };

        let lo = (3.0 * a + b) / 4.0;
        let cond = !((lo.min(b) < s && s < lo.max(b))
            && !(mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            && !(!mflag && (s - b).abs() >= (c - d).abs() / 2.0)
            && !(mflag && (b - c).abs() < xtol)
            && !(!mflag && (c - d).abs() < xtol));
        if cond {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Ok(b)
}

/// Newton iteration safeguarded by a maintained bracket `[lo, hi]` with
/// `f(lo) <= 0 <= f(hi)` or the reverse. Falls back to bisection whenever a
/// Newton step leaves the bracket or stalls.
pub fn newton_bracketed<F, G>(f: F, df: G, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::Numerical(format!(
            "newton_bracketed: [{a}, {b}] does not bracket a root"
        )));
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..max_iter {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx * fa > 0.0 {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        if (b - a).abs() <= xtol {
            return Ok(0.5 * (a + b));
        }
        let dfx = df(x);
        let newton = if dfx != 0.0 { x - fx / dfx } else { f64::NAN };
        x = if newton.is_finite() && newton > a.min(b) && newton < a.max(b) {
            newton
        } else {
            0.5 * (a + b)
        };
    }
    Ok(0.5 * (a + b))
}

/// Scan `[a, b]` on `n` uniform nodes and return every bracketing subinterval
/// (sign change or exact zero).
pub fn scan_brackets<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let step = (b - a) / (n - 1) as f64;
    let mut x_prev = a;
    let mut f_prev = f(a);
    for i in 1..n {
        let x = a + i as f64 * step;
        let fx = f(x);
        if f_prev == 0.0 || f_prev * fx < 0.0 {
            out.push((x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    out
}
