//! Bracketing root finders.

use crate::error::{Error, Result};

/// Widens `[a, b]` geometrically about its midpoint until `f` changes sign or
/// the half-width exceeds `limit`.
pub fn expand_bracket<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, limit: f64) -> Option<(f64, f64)> {
    let mid = 0.5 * (a + b);
    let mut half = 0.5 * (b - a).abs().max(f64::MIN_POSITIVE);
    while half <= limit {
        let (lo, hi) = (mid - half, mid + half);
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 || fhi == 0.0 || flo.signum() != fhi.signum() {
            return Some((lo, hi));
        }
        half *= 2.0;
    }
    None
}

/// Plain bisection to absolute width `xtol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    check_bracket(a, b, fa, fb)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    for _ in 0..2000 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

fn check_bracket(a: f64, b: f64, fa: f64, fb: f64) -> Result<()> {
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSolutionInBracket(format!(
            "function is NaN at bracket end [{a}, {b}]"
        )));
    }
    if fa != 0.0 && fb != 0.0 && fa.signum() == fb.signum() {
        return Err(Error::NoSolutionInBracket(format!(
            "f({a}) = {fa} and f({b}) = {fb} have the same sign"
        )));
    }
    Ok(())
}

/// Bisection refined by secant steps (Dekker's method).
///
/// The secant step from the two latest iterates is taken when it falls
/// between the current best point and the bracket midpoint; otherwise the
/// midpoint is used. A bisection is forced whenever three consecutive steps
/// fail to halve the bracket. Terminates when the bracket is narrower than
/// `xtol + 4 eps |x|`.
pub fn secant_bisection<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    check_bracket(a, b, fa, fb)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb.abs() > fa.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    // b: best estimate, a: contrapoint, (prev, fprev): previous best.
    let (mut prev, mut fprev) = (a, fa);
    let mut width_mark = (b - a).abs();
    let mut since_halved = 0;
    for _ in 0..500 {
        let tol = xtol + 4.0 * f64::EPSILON * b.abs();
        if fb == 0.0 || (b - a).abs() <= tol {
            return Ok(b);
        }
        let m = 0.5 * (a + b);
        let secant = if fb != fprev {
            b - fb * (b - prev) / (fb - fprev)
        } else {
            m
        };
        let between = (secant - b) * (secant - m) < 0.0;
        let mut next = if between && since_halved < 3 { secant } else { m };
        if (next - b).abs() < 0.5 * tol {
            next = b + 0.5 * tol * (m - b).signum();
        }
        prev = b;
        fprev = fb;
        b = next;
        fb = f(b);
        if fb.signum() == fa.signum() && fb != 0.0 {
            a = prev;
            fa = fprev;
        }
        if fb.abs() > fa.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
        let width = (b - a).abs();
        if width <= 0.5 * width_mark {
            width_mark = width;
            since_halved = 0;
        } else {
            since_halved += 1;
        }
    }
    Ok(b)
}
