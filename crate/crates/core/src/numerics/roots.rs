use super::{NumericsError, Result};

const MAX_ROOT_ITERATIONS: usize = 400;

/// Stopping rule for [`find_root_with`]: stop once `|f(x)| <= f` or the
/// bracket is no wider than `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTolerance {
    pub x: f64,
    pub f: f64,
}

/// Bracketed root of `f` on `[lo, hi]`, stopping when `|f(x)| <= tol` or the
/// bracket width is `<= tol`.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    find_root_with(f, lo, hi, RootTolerance { x: tol, f: tol })
}

/// Secant steps inside a shrinking bracket, falling back to bisection
/// whenever a step fails to at least halve the bracket.
pub fn find_root_with<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: RootTolerance,
) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(NumericsError::InvalidArgument(format!(
            "root bracket must satisfy lo <= hi, got [{lo}, {hi}]"
        )));
    }
    if !(tol.x >= 0.0 && tol.f >= 0.0) {
        return Err(NumericsError::InvalidArgument(
            "root tolerances must be >= 0".into(),
        ));
    }
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_nan() {
            Err(NumericsError::NonFiniteFunction { x })
        } else {
            Ok(y)
        }
    };

    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (eval(a)?, eval(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NoBracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut use_secant = true;
    for _ in 0..MAX_ROOT_ITERATIONS {
        let width = b - a;
        if width <= tol.x {
            break;
        }
        let mid = a + 0.5 * width;
        let secant = b - fb * (b - a) / (fb - fa);
        let x = if use_secant && secant.is_finite() && secant > a && secant < b {
            secant
        } else {
            mid
        };
        if x <= a || x >= b {
            // Bracket is down to adjacent floats.
            break;
        }
        let fx = eval(x)?;
        if fx == 0.0 || fx.abs() <= tol.f {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        use_secant = b - a <= 0.5 * width;
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}
