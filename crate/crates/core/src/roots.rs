// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

//! Safeguarded Newton iteration for scalar equations on a sign-changing
//! bracket.

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;

/// Finds a root of `f` in `[lo, hi]`, where `f` returns `(value, slope)`.
///
/// Newton steps are taken while they stay inside the current bracket and
/// shrink it fast enough; otherwise the step falls back to bisection. The
/// bracket must change sign. Iteration stops once a step is below `x_tol`
/// or within a few ulps of the iterate.
pub fn bracketed_newton<F>(mut f: F, lo: f64, hi: f64, x_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (f_lo, _) = f(lo);
    let (f_hi, _) = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::SolverFailure {
            p: f64::NAN,
            residual: f_lo.abs().min(f_hi.abs()),
            iterations: 0,
        });
    }
    // orient so that f(neg) < 0 < f(pos)
    let (mut neg, mut pos) = if f_lo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = 0.5 * (lo + hi);
    let mut last_step = (hi - lo).abs();
    let mut step = last_step;
    let (mut fx, mut dfx) = f(x);
    for _ in 0..MAX_ITERATIONS {
        let newton_ok = dfx != 0.0 && {
            let candidate = x - fx / dfx;
            let inside = (candidate - neg) * (candidate - pos) < 0.0;
            inside && (2.0 * fx).abs() <= (last_step * dfx).abs()
        };
        last_step = step;
        if newton_ok {
            step = fx / dfx;
            x -= step;
        } else {
            step = 0.5 * (pos - neg);
            x = neg + step;
        }
        if step.abs() < x_tol || step.abs() <= 4.0 * f64::EPSILON * x.abs() {
            return Ok(x);
        }
        (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
    }
    Err(Error::SolverFailure {
        p: f64::NAN,
        residual: fx.abs(),
        iterations: MAX_ITERATIONS,
    })
}
