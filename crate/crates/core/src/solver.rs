// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

//! Numerical derivation of the asymmetric sequences A2, A3 and A4.
//!
//! An `n`-pulse sequence has `2n − 1` free parameters (all areas and the
//! phases after the first). They are fixed by requiring the probability
//! series to read `c₀ = p` and `c₁ = … = c_{2n−2} = 0`, which leaves an error
//! of order `O(ε^{2n−1})`. The square system is solved by Marquardt-damped
//! Newton iteration with a central-difference Jacobian.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::series::{probability_error_order, probability_series, verification_order, DEFAULT_TOLERANCE};
use crate::su2::{normalize_phase, CompositeSequence, Pulse};
use crate::tables;

/// Convergence threshold on the max-abs residual, relative to p.
pub const RESIDUAL_TOLERANCE: f64 = 1e-11;
pub const MAX_ITERATIONS: usize = 100;
/// Marquardt damping: the diagonal of JᵀJ is scaled by `1 + μ`. μ shrinks
/// after every accepted step and grows after every rejected one.
pub const INITIAL_DAMPING: f64 = 1e-3;
pub const MIN_DAMPING: f64 = 1e-12;
pub const MAX_DAMPING_INCREASES: usize = 40;
/// Central-difference step on each unknown (radians).
pub const JACOBIAN_STEP: f64 = 1e-7;

/// The square nonlinear system for an `n`-pulse asymmetric sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetricProblem {
    n_pulses: usize,
    target_p: f64,
}

impl AsymmetricProblem {
    pub fn new(n_pulses: usize, target_p: f64) -> Result<Self> {
        if !(2..=4).contains(&n_pulses) {
            return Err(Error::InvalidArgument(format!(
                "asymmetric sequences are supported for 2 to 4 pulses, got {n_pulses}"
            )));
        }
        if !(target_p > 0.0 && target_p < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "target probability must lie in (0, 1), got {target_p}"
            )));
        }
        Ok(Self { n_pulses, target_p })
    }

    pub fn n_pulses(&self) -> usize {
        self.n_pulses
    }

    pub fn target_p(&self) -> f64 {
        self.target_p
    }

    /// Number of unknowns, equal to the number of conditions.
    pub fn dimension(&self) -> usize {
        2 * self.n_pulses - 1
    }

    /// The error order a solution attains.
    pub fn design_order(&self) -> usize {
        2 * self.n_pulses - 1
    }

    fn with_target(&self, target_p: f64) -> Result<Self> {
        Self::new(self.n_pulses, target_p)
    }

    fn check_len(&self, unknowns: &[f64]) -> Result<()> {
        if unknowns.len() != self.dimension() {
            return Err(Error::InvalidArgument(format!(
                "expected {} unknowns, got {}",
                self.dimension(),
                unknowns.len()
            )));
        }
        if let Some(bad) = unknowns.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("unknowns must be finite, got {bad}")));
        }
        Ok(())
    }

    /// Sequence for unknowns `[A₁…Aₙ, φ₂…φₙ]` in radians. Negative areas
    /// are folded into the phase, which leaves the propagator unchanged.
    pub fn sequence(&self, unknowns: &[f64]) -> Result<CompositeSequence> {
        self.check_len(unknowns)?;
        let n = self.n_pulses;
        let pulses = (0..n)
            .map(|k| {
                let phase = if k == 0 { 0.0 } else { unknowns[n + k - 1] };
                Pulse::from_signed(unknowns[k], phase)
            })
            .collect::<Result<Vec<_>>>()?;
        CompositeSequence::new(pulses)
    }

    /// Inverse of [`AsymmetricProblem::sequence`] for a canonical sequence.
    pub fn unknowns_of(&self, seq: &CompositeSequence) -> Result<Vec<f64>> {
        if seq.len() != self.n_pulses {
            return Err(Error::InvalidArgument(format!(
                "sequence has {} pulses, problem expects {}",
                seq.len(),
                self.n_pulses
            )));
        }
        let canonical = seq.canonicalize();
        let mut v: Vec<f64> = canonical.pulses().iter().map(Pulse::area).collect();
        v.extend(canonical.pulses()[1..].iter().map(Pulse::phase));
        Ok(v)
    }

    /// Unknowns (radians) from a row given in units of π.
    pub fn unknowns_from_pi(&self, values_pi: &[f64]) -> Result<Vec<f64>> {
        let v: Vec<f64> = values_pi.iter().map(|x| x * PI).collect();
        self.check_len(&v)?;
        Ok(v)
    }
}

/// Outcome of a successful solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub target_p: f64,
    /// Canonical solution.
    pub sequence: CompositeSequence,
    /// `[A₁…Aₙ, φ₂…φₙ]` in radians, phases in `[0, 2π)`.
    pub unknowns: Vec<f64>,
    /// Max-abs residual at the solution.
    pub residual: f64,
    /// Rounding floor of the residual when iteration stopped on it rather
    /// than on the relative tolerance; zero otherwise.
    pub residual_floor: f64,
    pub iterations: usize,
    /// Probability error order confirmed by the series engine.
    pub verified_order: usize,
    pub seed: Vec<f64>,
}

impl SolverReport {
    /// Unknowns in units of π.
    pub fn unknowns_pi(&self) -> Vec<f64> {
        self.unknowns.iter().map(|v| v / PI).collect()
    }
}

/// `[c₀ − p, c₁, …, c_{2n−2}]` of the probability series.
pub fn residual(problem: &AsymmetricProblem, unknowns: &[f64]) -> Result<Vec<f64>> {
    let seq = problem.sequence(unknowns)?;
    let mut c = probability_series(&seq, problem.dimension())?;
    c.truncate(problem.dimension());
    c[0] -= problem.target_p;
    Ok(c)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Central-difference Jacobian of [`residual`], row-major
/// (`jac[i][j] = ∂rᵢ/∂xⱼ`).
pub fn jacobian(problem: &AsymmetricProblem, unknowns: &[f64], step: f64) -> Result<Vec<Vec<f64>>> {
    let dim = problem.dimension();
    let mut jac = vec![vec![0.0; dim]; dim];
    let mut x = unknowns.to_vec();
    for j in 0..dim {
        let orig = x[j];
        x[j] = orig + step;
        let plus = residual(problem, &x)?;
        x[j] = orig - step;
        let minus = residual(problem, &x)?;
        x[j] = orig;
        for i in 0..dim {
            jac[i][j] = (plus[i] - minus[i]) / (2.0 * step);
        }
    }
    Ok(jac)
}

/// Damped Newton solve from `seed` (radians).
///
/// Steps solve `(JᵀJ + μ·diag(JᵀJ)) δ = −Jᵀr` and are accepted only if they
/// reduce ‖r‖₂. As μ → 0 this is the plain Newton step, so convergence is
/// quadratic near the root; larger μ keeps the iterate close to the seed
/// when J is ill-conditioned, as it is for small p. Iteration also stops
/// once the residual reaches the rounding floor of the unknowns.
pub fn solve(problem: &AsymmetricProblem, seed: &[f64]) -> Result<SolverReport> {
    let p = problem.target_p;
    let tol = RESIDUAL_TOLERANCE * p.max(1e-30);
    let dim = problem.dimension();
    let mut x = seed.to_vec();
    let mut r = residual(problem, &x)?;
    let mut best = max_abs(&r);
    let mut iterations = 0;
    let mut floor = None;
    let mut damping = INITIAL_DAMPING;
    while best > tol {
        if iterations == MAX_ITERATIONS {
            return Err(Error::SolverFailure {
                p,
                residual: best,
                iterations,
            });
        }
        iterations += 1;
        let jac = jacobian(problem, &x, JACOBIAN_STEP)?;
        let resolvable = representation_floor(&jac, &x);
        if best <= resolvable {
            floor = Some(resolvable);
            break;
        }
        let j = DMatrix::from_fn(dim, dim, |i, k| jac[i][k]);
        let jt = j.transpose();
        let normal = &jt * &j;
        let gradient = &jt * DVector::from_column_slice(&r);
        if normal.diagonal().iter().any(|&d| d == 0.0) || !normal.iter().all(|v| v.is_finite()) {
            return Err(Error::DegenerateSeed { p });
        }

        let current = euclid(&r);
        let mut accepted = None;
        for _ in 0..=MAX_DAMPING_INCREASES {
            let mut a = normal.clone();
            for k in 0..dim {
                a[(k, k)] *= 1.0 + damping;
            }
            let step = a
                .lu()
                .solve(&(-&gradient))
                .filter(|s| s.iter().all(|v| v.is_finite()))
                .ok_or(Error::DegenerateSeed { p })?;
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + d).collect();
            if let Ok(rt) = residual(problem, &trial) {
                if euclid(&rt) < current {
                    accepted = Some((trial, rt));
                    damping = (damping / 3.0).max(MIN_DAMPING);
                    break;
                }
            }
            damping *= 4.0;
        }
        match accepted {
            Some((trial, rt)) => {
                x = trial;
                r = rt;
                best = max_abs(&r);
            }
            None => {
                return Err(Error::SolverFailure {
                    p,
                    residual: best,
                    iterations,
                })
            }
        }
    }
    let mut report = finish(problem, x, best, iterations, seed.to_vec())?;
    report.residual_floor = floor.unwrap_or(0.0);
    Ok(report)
}

/// Smallest residual resolvable in double precision near `x`: the change
/// caused by rounding every unknown to the nearest representable value.
fn representation_floor(jac: &[Vec<f64>], x: &[f64]) -> f64 {
    jac.iter()
        .map(|row| row.iter().zip(x).map(|(j, v)| (j * v).abs()).sum::<f64>())
        .fold(0.0, f64::max)
        * 4.0
        * f64::EPSILON
}

fn finish(
    problem: &AsymmetricProblem,
    x: Vec<f64>,
    residual: f64,
    iterations: usize,
    seed: Vec<f64>,
) -> Result<SolverReport> {
    let sequence = problem.sequence(&x)?.canonicalize();
    let unknowns = problem.unknowns_of(&sequence)?;
    let order = problem.design_order();
    let verified_order = probability_error_order(
        &sequence,
        problem.target_p,
        verification_order(order),
        DEFAULT_TOLERANCE,
    )?;
    Ok(SolverReport {
        target_p: problem.target_p,
        sequence,
        unknowns,
        residual,
        residual_floor: 0.0,
        iterations,
        verified_order,
        seed,
    })
}

/// Tracks a solution from `p_from` to `p_to` through `steps` geometrically
/// spaced targets, seeding each solve with the previous solution.
///
/// `start` must be a converged solution at `p_from` (radians).
pub fn continuation(
    n_pulses: usize,
    start: &[f64],
    p_from: f64,
    p_to: f64,
    steps: usize,
) -> Result<SolverReport> {
    let from = AsymmetricProblem::new(n_pulses, p_from)?;
    let to = from.with_target(p_to)?;
    if steps == 0 {
        if p_from == p_to {
            let r = max_abs(&residual(&from, start)?);
            return finish(&from, start.to_vec(), r, 0, start.to_vec());
        }
        return solve(&to, start);
    }
    let ratio = (p_to / p_from).ln();
    let mut x = start.to_vec();
    let mut last = None;
    for i in 1..=steps {
        let p = if i == steps {
            p_to
        } else {
            p_from * (ratio * i as f64 / steps as f64).exp()
        };
        let report = solve(&from.with_target(p)?, &x)?;
        x = report.unknowns.clone();
        last = Some(report);
    }
    let mut report = last.expect("steps > 0");
    report.seed = start.to_vec();
    Ok(report)
}

/// Published row whose p is closest to `p` on a log scale.
pub fn nearest_anchor(n_pulses: usize, p: f64) -> Option<&'static tables::TableRow> {
    tables::asymmetric_rows(n_pulses)?.iter().min_by(|a, b| {
        let da = (a.p.ln() - p.ln()).abs();
        let db = (b.p.ln() - p.ln()).abs();
        da.total_cmp(&db)
    })
}

/// Solves the `n`-pulse problem at an arbitrary `p`: from the nearest
/// published row, continued along the branch that row lies on.
pub fn solve_from_tables(n_pulses: usize, p: f64) -> Result<SolverReport> {
    let problem = AsymmetricProblem::new(n_pulses, p)?;
    let anchor = nearest_anchor(n_pulses, p)
        .ok_or_else(|| Error::InvalidArgument(format!("no table for {n_pulses} pulses")))?;
    let anchor_problem = problem.with_target(anchor.p)?;
    let seed = anchor_problem.unknowns_from_pi(&tables::unknowns_pi(n_pulses, anchor))?;
    let at_anchor = solve(&anchor_problem, &seed)?;
    let decades = (p / anchor.p).log10().abs();
    if decades < 1e-12 {
        return Ok(at_anchor);
    }
    let steps = ((decades * 8.0).ceil() as usize).max(1);
    continuation(n_pulses, &at_anchor.unknowns, anchor.p, p, steps)
}

/// Wraps every phase unknown into `[0, 2π)`.
pub fn wrap_unknowns(problem: &AsymmetricProblem, unknowns: &mut [f64]) {
    for v in unknowns[problem.n_pulses..].iter_mut() {
        *v = normalize_phase(*v);
    }
}
