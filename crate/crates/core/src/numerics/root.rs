use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
}

const MAX_ITER: usize = 400;

/// Bracketing root finder: secant (regula falsi) steps kept strictly inside
/// the bracket, with a forced bisection whenever the bracket fails to halve
/// over two iterations.
///
/// Stops when `|f(x)| < tol` or the bracket is narrower than `tol`.
pub fn find_root(f: impl Fn(f64) -> f64, bracket: (f64, f64), tol: f64) -> Result<RootResult> {
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    let mut flo = f(lo);
    let mut fhi = f(hi);
    let no_sign_change = |lo, hi, flo, fhi| Error::NoSignChange { lo, hi, flo, fhi };

    if !(flo.is_finite() && fhi.is_finite()) {
        return Err(no_sign_change(lo, hi, flo, fhi));
    }
    if flo == 0.0 {
        return Ok(RootResult {
            root: lo,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fhi == 0.0 {
        return Ok(RootResult {
            root: hi,
            residual: 0.0,
            iterations: 0,
        });
    }
    if flo.signum() == fhi.signum() {
        return Err(no_sign_change(lo, hi, flo, fhi));
    }

    let mut width_two_ago = f64::INFINITY;
    let mut width_one_ago = hi - lo;
    let mut best = if flo.abs() < fhi.abs() { (lo, flo) } else { (hi, fhi) };

    for it in 1..=MAX_ITER {
        debug_assert!(flo.signum() != fhi.signum());
        let width = hi - lo;
        if best.1.abs() < tol {
            return Ok(RootResult {
                root: best.0,
                residual: best.1,
                iterations: it - 1,
            });
        }
        if width < tol {
            let (root, residual) = if flo.abs() <= fhi.abs() { (lo, flo) } else { (hi, fhi) };
            return Ok(RootResult {
                root,
                residual,
                iterations: it - 1,
            });
        }

        let mid = lo + 0.5 * width;
        let force_bisect = width > 0.5 * width_two_ago;
        let x = if force_bisect {
            mid
        } else {
            let s = lo - flo * (hi - lo) / (fhi - flo);
            // keep the trial point away from the endpoints
            let guard = 1e-3 * width;
            if s.is_finite() && s > lo + guard && s < hi - guard {
                s
            } else {
                mid
            }
        };
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NoRoot(format!("non-finite function value at x = {x}")));
        }
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            return Ok(RootResult {
                root: x,
                residual: 0.0,
                iterations: it,
            });
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        width_two_ago = width_one_ago;
        width_one_ago = width;
    }
    Err(Error::NoRoot(format!("iteration limit reached on [{lo}, {hi}]")))
}
