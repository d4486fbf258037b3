// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

//! Robustness profiles P(ε), high-fidelity window widths and side-by-side
//! comparisons of sequences.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::series::{probability_error_order, DEFAULT_TOLERANCE};
use crate::su2::{transition_probability, CompositeSequence};

pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_DOMAIN: (f64, f64) = (-0.5, 0.5);
pub const DEFAULT_POINTS: usize = 1001;
pub const LOG_ERROR_FLOOR: f64 = -16.0;
/// Resolution to which window edges are bisected.
pub const WINDOW_RESOLUTION: f64 = 1e-6;
/// Series order used by [`compare`] to read off error orders.
pub const COMPARE_ORDER: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub probability: f64,
    /// log₁₀|P − p|, floored at [`LOG_ERROR_FLOOR`].
    pub log10_abs_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowMetric {
    pub delta: f64,
    pub left: f64,
    pub right: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub label: String,
    pub total_area_pi: f64,
    pub verified_order: usize,
    pub width: f64,
}

fn log_error(probability: f64, p: f64) -> f64 {
    let e = (probability - p).abs();
    if e == 0.0 {
        LOG_ERROR_FLOOR
    } else {
        e.log10().max(LOG_ERROR_FLOOR)
    }
}

/// Uniform grid of `points` values from `min` to `max` inclusive.
pub fn grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    ensure_finite("eps_min", min)?;
    ensure_finite("eps_max", max)?;
    if points < 2 {
        return Err(Error::InvalidArgument(format!("a sweep needs at least 2 points, got {points}")));
    }
    if !(min < max) {
        return Err(Error::InvalidArgument(format!("eps_min {min} must be below eps_max {max}")));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                max
            } else {
                min + (max - min) * (i as f64 / last)
            }
        })
        .collect())
}

/// Evaluates the transition probability on a uniform ε grid.
pub fn sweep(
    seq: &CompositeSequence,
    target_p: f64,
    eps_min: f64,
    eps_max: f64,
    points: usize,
) -> Result<Vec<SweepRecord>> {
    grid(eps_min, eps_max, points)?
        .into_iter()
        .map(|epsilon| {
            let probability = transition_probability(seq, epsilon)?;
            Ok(SweepRecord {
                epsilon,
                probability,
                log10_abs_error: log_error(probability, target_p),
            })
        })
        .collect()
}

fn inside(seq: &CompositeSequence, p: f64, delta: f64, eps: f64) -> Result<bool> {
    Ok((transition_probability(seq, eps)? - p).abs() <= delta * p)
}

/// Walks from ε = 0 towards `edge` along `steps`, returning the last grid
/// point inside the band and, if the band is left, the first one outside.
fn scan(
    seq: &CompositeSequence,
    p: f64,
    delta: f64,
    steps: impl Iterator<Item = f64>,
) -> Result<(f64, Option<f64>)> {
    let mut good = 0.0;
    for eps in steps {
        if inside(seq, p, delta, eps)? {
            good = eps;
        } else {
            return Ok((good, Some(eps)));
        }
    }
    Ok((good, None))
}

fn bisect(seq: &CompositeSequence, p: f64, delta: f64, mut good: f64, mut bad: f64) -> Result<f64> {
    while (bad - good).abs() > WINDOW_RESOLUTION {
        let mid = 0.5 * (good + bad);
        if inside(seq, p, delta, mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Maximal interval around ε = 0 on which |P(ε) − p| ≤ δ·p, located on
/// the default grid and refined by bisection. Saturates at the domain.
pub fn window(seq: &CompositeSequence, p: f64, delta: f64) -> Result<WindowMetric> {
    window_on(seq, p, delta, DEFAULT_DOMAIN, DEFAULT_POINTS)
}

pub fn window_on(
    seq: &CompositeSequence,
    p: f64,
    delta: f64,
    domain: (f64, f64),
    points: usize,
) -> Result<WindowMetric> {
    ensure_finite("delta", delta)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let (lo, hi) = domain;
    if !(lo <= 0.0 && hi >= 0.0) {
        return Err(Error::InvalidArgument("window domain must contain 0".into()));
    }
    if !inside(seq, p, delta, 0.0)? {
        return Ok(WindowMetric { delta, left: 0.0, right: 0.0, width: 0.0 });
    }
    let g = grid(lo, hi, points)?;
    let right_steps = g.iter().copied().filter(|&e| e > 0.0);
    let left_steps = g.iter().rev().copied().filter(|&e| e < 0.0);
    let right = match scan(seq, p, delta, right_steps)? {
        (good, Some(bad)) => bisect(seq, p, delta, good, bad)?,
        (_, None) => hi,
    };
    let left = match scan(seq, p, delta, left_steps)? {
        (good, Some(bad)) => bisect(seq, p, delta, good, bad)?,
        (_, None) => lo,
    };
    Ok(WindowMetric { delta, left, right, width: right - left })
}

/// One row per sequence, ordered by label.
pub fn compare(entries: &[(String, CompositeSequence)], p: f64, delta: f64) -> Result<Vec<ComparisonRow>> {
    if entries.is_empty() {
        return Err(Error::InvalidArgument("nothing to compare".into()));
    }
    let mut rows = entries
        .iter()
        .map(|(label, seq)| {
            Ok(ComparisonRow {
                label: label.clone(),
                total_area_pi: seq.total_area() / PI,
                verified_order: probability_error_order(seq, p, COMPARE_ORDER, DEFAULT_TOLERANCE)?,
                width: window(seq, p, delta)?.width,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(rows)
}
