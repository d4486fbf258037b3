// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

//! Analytic constructors for the named sequences.
//!
//! Sequences producing a θ-rotation take a [`DesignSpec`], which fixes the
//! target probability `p` and the angle `θ = 2·arcsin(√p)`. The `*_for_angle`
//! variants accept θ directly so that, for example, S2 at θ = π/2 can serve
//! as the half-pi building block of a twinned sequence.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::roots::bracketed_newton;
use crate::su2::{compose, transition_probability, wrap_difference, CompositeSequence, Pulse, Unitary2};

/// Largest target probability accepted by the small-p constructors.
pub const MAX_TARGET_P: f64 = 0.25;

/// How close P(0) must be to 1/2 for a sequence to count as half-pi.
pub const HALF_PI_TOLERANCE: f64 = 1e-9;

/// Target transition probability and the equivalent single-pulse angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignSpec {
    target_p: f64,
    theta: f64,
}

impl DesignSpec {
    pub fn new(target_p: f64) -> Result<Self> {
        if !(target_p > 0.0 && target_p <= MAX_TARGET_P) {
            return Err(Error::Range {
                p: target_p,
                range: "(0, 0.25]",
            });
        }
        Ok(Self {
            target_p,
            theta: 2.0 * target_p.sqrt().asin(),
        })
    }

    pub fn target_p(&self) -> f64 {
        self.target_p
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

fn half_pi_check(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "{what} needs at least 2 pulses, got {n}"
        )));
    }
    Ok(())
}

/// `(π/2)₀ (π/2)_{π−θ}`.
pub fn s2_for_angle(theta: f64) -> Result<CompositeSequence> {
    CompositeSequence::from_angles(&[(FRAC_PI_2, 0.0), (FRAC_PI_2, PI - theta)])
}

pub fn s2(spec: &DesignSpec) -> Result<CompositeSequence> {
    s2_for_angle(spec.theta)
}

/// Perturbative small-p constants for A2: `x`, `y/√p`, `φ/√p` (units of π).
pub const A2_PERTURBATIVE: (f64, f64, f64) = (0.7151, 0.2553, 0.4875);

/// `(x−y)₀ (x+y)_{π−φ}` with the leading-order small-p constants.
///
/// Intended as a Newton seed for [`crate::solver`], not as a finished design.
pub fn a2_seed(spec: &DesignSpec) -> Result<CompositeSequence> {
    let (x, y, phi) = A2_PERTURBATIVE;
    let root = spec.target_p.sqrt();
    let x = x * PI;
    let y = y * PI * root;
    let phi = phi * PI * root;
    CompositeSequence::from_angles(&[(x - y, 0.0), (x + y, PI - phi)])
}

/// The `β` of S3: principal branch of `arccos(sin α − cos α)`, `α = θ/2`.
pub fn s3_beta(theta: f64) -> f64 {
    let alpha = theta / 2.0;
    (alpha.sin() - alpha.cos()).clamp(-1.0, 1.0).acos()
}

/// `(π/2)₀ π_{α+β} (π/2)_{2β}`.
pub fn s3_for_angle(theta: f64) -> Result<CompositeSequence> {
    let alpha = theta / 2.0;
    let beta = s3_beta(theta);
    CompositeSequence::from_angles(&[
        (FRAC_PI_2, 0.0),
        (PI, alpha + beta),
        (FRAC_PI_2, 2.0 * beta),
    ])
}

pub fn s3(spec: &DesignSpec) -> Result<CompositeSequence> {
    s3_for_angle(spec.theta)
}

/// Four π/2 pulses with phases `{0, π/2, 3π/2−θ, π−θ}`.
pub fn s4a_for_angle(theta: f64) -> Result<CompositeSequence> {
    CompositeSequence::from_angles(&[
        (FRAC_PI_2, 0.0),
        (FRAC_PI_2, FRAC_PI_2),
        (FRAC_PI_2, 1.5 * PI - theta),
        (FRAC_PI_2, PI - theta),
    ])
}

pub fn s4a(spec: &DesignSpec) -> Result<CompositeSequence> {
    s4a_for_angle(spec.theta)
}

/// `(π/2)₀ π_{2π/3} π_{5π/3−θ} (π/2)_{π−θ}`.
pub fn s4b_for_angle(theta: f64) -> Result<CompositeSequence> {
    CompositeSequence::from_angles(&[
        (FRAC_PI_2, 0.0),
        (PI, 2.0 * PI / 3.0),
        (PI, 5.0 * PI / 3.0 - theta),
        (FRAC_PI_2, PI - theta),
    ])
}

pub fn s4b(spec: &DesignSpec) -> Result<CompositeSequence> {
    s4b_for_angle(spec.theta)
}

/// `(π/2)₀ π_{φ₂} ⋯ π_{φ_{N−1}} (π/2)_{φ_N}` with
/// `φ_k = (k−1)²π / (2(N−1))`. Produces P(0) = 1/2.
pub fn symmetric_half_pi_family(n: usize) -> Result<CompositeSequence> {
    half_pi_check(n, "symmetric half-pi family")?;
    let denom = 2.0 * (n as f64 - 1.0);
    let pairs: Vec<_> = (1..=n)
        .map(|k| {
            let area = if k == 1 || k == n { FRAC_PI_2 } else { PI };
            let j = (k - 1) as f64;
            (area, j * j * PI / denom)
        })
        .collect();
    CompositeSequence::from_angles(&pairs)
}

/// `(π/2)₀ π_{φ₂} ⋯ π_{φ_N}` with `φ_k = 2(k−1)²π / (2N−1)`.
/// Produces P(0) = 1/2.
pub fn asymmetric_half_pi_family(n: usize) -> Result<CompositeSequence> {
    half_pi_check(n, "asymmetric half-pi family")?;
    let denom = 2.0 * n as f64 - 1.0;
    let pairs: Vec<_> = (1..=n)
        .map(|k| {
            let area = if k == 1 { FRAC_PI_2 } else { PI };
            let j = (k - 1) as f64;
            (area, 2.0 * j * j * PI / denom)
        })
        .collect();
    CompositeSequence::from_angles(&pairs)
}

/// Twinning: a half-pi sequence `C` followed by its time reverse with every
/// phase shifted by `π − θ`. The result produces P(0) = sin²(θ/2) and
/// doubles the probability error order of `C`.
pub fn twin(c: &CompositeSequence, theta: f64) -> Result<CompositeSequence> {
    let p0 = transition_probability(c, 0.0)?;
    if (p0 - 0.5).abs() > HALF_PI_TOLERANCE {
        return Err(Error::NotHalfPi { p0 });
    }
    Ok(c.concat(&c.reversed().shift_phases(PI - theta)))
}

/// Six-pulse twin of S3 at θ = π/2.
pub fn cp6s(spec: &DesignSpec) -> Result<CompositeSequence> {
    twin(&s3_for_angle(FRAC_PI_2)?, spec.theta)
}

/// Six-pulse twin of the asymmetric half-pi family at N = 3.
pub fn cp6a(spec: &DesignSpec) -> Result<CompositeSequence> {
    twin(&asymmetric_half_pi_family(3)?, spec.theta)
}

/// The W3 correction phase `arccos(−θ/(2π))`.
pub fn w3_phase(theta: f64) -> f64 {
    (-theta / (2.0 * PI)).acos()
}

/// Exact W3 phase alongside its two small-θ linearizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct W3PhaseDiagnostic {
    pub exact: f64,
    /// `π/2 + √p`, the linearization as usually quoted.
    pub half_pi_plus_sqrt_p: f64,
    /// `π/2 + √p/π`, the first-order expansion of the arccos.
    pub half_pi_plus_sqrt_p_over_pi: f64,
}

pub fn w3_phase_diagnostic(spec: &DesignSpec) -> W3PhaseDiagnostic {
    let root = spec.target_p.sqrt();
    W3PhaseDiagnostic {
        exact: w3_phase(spec.theta),
        half_pi_plus_sqrt_p: FRAC_PI_2 + root,
        half_pi_plus_sqrt_p_over_pi: FRAC_PI_2 + root / PI,
    }
}

/// `θ₀ π_φ π_{3φ}` with `φ = arccos(−θ/(2π))`.
pub fn w3(spec: &DesignSpec) -> Result<CompositeSequence> {
    let phi = w3_phase(spec.theta);
    CompositeSequence::from_angles(&[(spec.theta, 0.0), (PI, phi), (PI, 3.0 * phi)])
}

/// Parameters of `α_{φ₁} π_{φ₂} α_{φ₁}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G3Parameters {
    pub theta: f64,
    pub alpha: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl G3Parameters {
    /// `α − π/2` in units of π.
    pub fn x_pi(&self) -> f64 {
        (self.alpha - FRAC_PI_2) / PI
    }

    pub fn phi1_pi(&self) -> f64 {
        wrap_difference(self.phi1) / PI
    }

    /// `φ₂ − π` in units of π, wrapped to `(−1, 1]`.
    pub fn y_pi(&self) -> f64 {
        wrap_difference(self.phi2 - PI) / PI
    }

    /// Back-substituted residuals of the three defining equations:
    /// `π sin α/α − 2cos(θ/2)`, `2α cos(φ₁−φ₂) + π`, and
    /// `sin(φ₁−φ₂) − sin(θ/2) cos φ₁`.
    pub fn residuals(&self) -> [f64; 3] {
        let d = self.phi1 - self.phi2;
        [
            PI * self.alpha.sin() / self.alpha - 2.0 * (self.theta / 2.0).cos(),
            2.0 * self.alpha * d.cos() + PI,
            d.sin() - (self.theta / 2.0).sin() * self.phi1.cos(),
        ]
    }

    pub fn sequence(&self) -> Result<CompositeSequence> {
        CompositeSequence::from_angles(&[
            (self.alpha, self.phi1),
            (PI, self.phi2),
            (self.alpha, self.phi1),
        ])
    }
}

/// Solves the G3 equations on the branch continuous with `α → π/2`.
pub fn g3_parameters(spec: &DesignSpec) -> Result<G3Parameters> {
    let p = spec.target_p;
    // 1 − cos(θ/2), without cancellation
    let q = p / (1.0 + (1.0 - p).sqrt());
    // π sin α/α = 2cos(θ/2) with α = π/2 + x, rearranged so that no O(1)
    // terms cancel: (π + 2x) q − 2x − 2π sin²(x/2) = 0
    let excess = bracketed_newton(
        |x| {
            let s = (x / 2.0).sin();
            let value = (PI + 2.0 * x) * q - 2.0 * x - 2.0 * PI * s * s;
            let slope = 2.0 * q - 2.0 - PI * x.sin();
            (value, slope)
        },
        0.0,
        0.1 * PI,
        0.0,
    )
    .map_err(|e| retag(e, p))?;
    let alpha = FRAC_PI_2 + excess;
    // cos d = −π/(2α), with 1 ± cos d formed directly
    let one_plus = 2.0 * excess / (PI + 2.0 * excess);
    let one_minus = (2.0 * PI + 2.0 * excess) / (PI + 2.0 * excess);
    let sin_d = (one_plus * one_minus).sqrt();
    let d = sin_d.atan2(-PI / (2.0 * alpha));
    let ratio = sin_d / p.sqrt();
    if ratio > 1.0 + 1e-12 {
        return Err(Error::SolverFailure {
            p,
            residual: ratio - 1.0,
            iterations: 0,
        });
    }
    let phi1 = ratio.min(1.0).acos();
    Ok(G3Parameters {
        theta: spec.theta,
        alpha,
        phi1,
        phi2: phi1 - d,
    })
}

fn retag(e: Error, p: f64) -> Error {
    match e {
        Error::SolverFailure {
            residual,
            iterations,
            ..
        } => Error::SolverFailure {
            p,
            residual,
            iterations,
        },
        other => other,
    }
}

/// `α_{φ₁} π_{φ₂} α_{φ₁}`; phases as solved, not canonicalized.
pub fn g3(spec: &DesignSpec) -> Result<CompositeSequence> {
    g3_parameters(spec)?.sequence()
}

/// The BB1 correction phase `arccos(−θ/(4π))`.
pub fn bb1_phase(theta: f64) -> f64 {
    (-theta / (4.0 * PI)).acos()
}

/// `θ₀ π_χ (2π)_{3χ} π_χ`. The correcting triplet is the identity at
/// ε = 0, so the nominal propagator is exactly `U(θ, 0)`.
pub fn bb1(spec: &DesignSpec) -> Result<CompositeSequence> {
    let chi = bb1_phase(spec.theta);
    CompositeSequence::from_angles(&[
        (spec.theta, 0.0),
        (PI, chi),
        (2.0 * PI, 3.0 * chi),
        (PI, chi),
    ])
}

/// Error-free propagator of a sequence, the reference for gate-level
/// error orders.
pub fn nominal_gate(seq: &CompositeSequence) -> Unitary2 {
    compose(seq, 0.0).expect("zero error is finite")
}

/// A single `θ₀` pulse, the uncompensated reference.
pub fn single_pulse(spec: &DesignSpec) -> Result<CompositeSequence> {
    CompositeSequence::new(vec![Pulse::new(spec.theta, 0.0)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{probability_error_order, probability_series, propagator_error_order};
    use crate::su2::gate_distance;

    fn spec(p: f64) -> DesignSpec {
        DesignSpec::new(p).unwrap()
    }

    fn p_at(seq: &CompositeSequence, eps: f64) -> f64 {
        transition_probability(seq, eps).unwrap()
    }

    fn assert_phases_pi(seq: &CompositeSequence, expected: &[f64], tol: f64) {
        let got = seq.to_pi_units();
        assert_eq!(got.len(), expected.len());
        for ((_, g), e) in got.iter().zip(expected) {
            assert!(
                wrap_difference((g - e) * PI).abs() / PI < tol,
                "phase {g} vs {e}"
            );
        }
    }

    #[test]
    fn spec_range() {
        assert!(DesignSpec::new(0.0).is_err());
        assert!(DesignSpec::new(0.3).is_err());
        assert!(DesignSpec::new(f64::NAN).is_err());
        let s = spec(0.25);
        assert!((s.theta() - PI / 3.0).abs() < 1e-15);
        for p in [1e-8, 1e-4, 1e-2, 0.25] {
            assert!(((spec(p).theta() / 2.0).sin().powi(2) - p).abs() < 1e-14 * p.max(1e-2));
        }
    }

    #[test]
    fn s2_phases_match_quoted_angles() {
        for (p, quoted) in [(1e-2, 0.0638), (1e-3, 0.0201), (1e-4, 0.0064), (1e-5, 0.0020)] {
            let theta_pi = spec(p).theta() / PI;
            assert!((theta_pi - quoted).abs() < 5e-5, "{p}: {theta_pi}");
            let seq = s2(&spec(p)).unwrap();
            assert_phases_pi(&seq, &[0.0, 1.0 - theta_pi], 1e-14);
        }
    }

    #[test]
    fn s2_closed_form_probability() {
        let s = spec(1e-4);
        let seq = s2(&s).unwrap();
        for eps in [0.0, 0.3, -0.7] {
            let expected = 1e-4 * (PI * eps / 2.0).cos().powi(2);
            assert!((p_at(&seq, eps) - expected).abs() < 1e-17);
        }
        // 1e-4·cos²(0.15π)
        assert!((p_at(&seq, 0.3) - 7.938_926_261_462_367e-5).abs() < 1e-17);
    }

    #[test]
    fn a2_seed_constants() {
        let seq = a2_seed(&spec(1e-8)).unwrap();
        let pi_units = seq.to_pi_units();
        assert!((pi_units[0].0 - (0.7151 - 0.2553e-4)).abs() < 1e-15);
        assert!((pi_units[1].0 - (0.7151 + 0.2553e-4)).abs() < 1e-15);
        let seq = a2_seed(&spec(1e-4)).unwrap();
        assert!((seq.to_pi_units()[1].1 - (1.0 - 0.004875)).abs() < 1e-14);
        let tiny = a2_seed(&spec(1e-30)).unwrap().to_pi_units();
        assert!((tiny[0].0 - 0.7151).abs() < 1e-12 && (tiny[1].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn s3_beta_solves_its_quadratic() {
        let s = spec(1e-4);
        let alpha = s.theta() / 2.0;
        assert!((alpha - 0.010_000_166_674_167).abs() < 1e-14);
        let beta = s3_beta(s.theta());
        assert!((beta - 2.999_699_170_547_226).abs() < 1e-13, "{beta}");
        for p in [1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.25] {
            let t = spec(p).theta();
            let b = s3_beta(t);
            assert!(b > FRAC_PI_2 && b <= PI);
            let eq = 2.0 * b.cos() * (t / 2.0).cos() + b.cos().powi(2) + t.cos();
            assert!(eq.abs() < 1e-12, "{p}: {eq}");
        }
    }

    #[test]
    fn s3_profile_carries_pi_in_the_sine() {
        // the exact profile is p[1 − sin⁴(πε/2)]; sin⁴(ε/2) is visibly off
        let p = 1e-2;
        let seq = s3(&spec(p)).unwrap();
        let eps: f64 = 0.1;
        let exact = p * (1.0 - (PI * eps / 2.0).sin().powi(4));
        let without_pi = p * (1.0 - (eps / 2.0).sin().powi(4));
        assert!((p_at(&seq, eps) - exact).abs() < 1e-15);
        assert!((p_at(&seq, eps) - without_pi).abs() > 1e-6);
    }

    #[test]
    fn s4a_phases() {
        let s = spec(1e-4);
        let theta_pi = s.theta() / PI;
        assert!((theta_pi - 0.006_366_303_831_746_142).abs() < 1e-15);
        assert_phases_pi(
            &s4a(&s).unwrap(),
            &[0.0, 0.5, 1.5 - theta_pi, 1.0 - theta_pi],
            1e-14,
        );
    }

    #[test]
    fn s4a_is_twin_of_half_pi_s2() {
        let s = spec(1e-4);
        let twinned = twin(&s2_for_angle(FRAC_PI_2).unwrap(), s.theta()).unwrap();
        let direct = s4a(&s).unwrap();
        for (a, b) in twinned.pulses().iter().zip(direct.pulses()) {
            assert!((a.area() - b.area()).abs() < 1e-15);
            assert!(wrap_difference(a.phase() - b.phase()).abs() < 1e-14);
        }
    }

    #[test]
    fn s4b_closed_form() {
        let p = 1e-4;
        let seq = s4b(&spec(p)).unwrap();
        assert!((seq.total_area() - 3.0 * PI).abs() < 1e-14);
        assert!((p_at(&seq, 0.0) - p).abs() < 1e-16);
        let expected = p * (1.0 - (0.1 * PI).sin().powi(6));
        assert!((p_at(&seq, 0.2) - expected).abs() < 1e-17);
        assert!((expected - 9.991_29e-5).abs() < 1e-10);
    }

    #[test]
    fn half_pi_families() {
        assert_phases_pi(&symmetric_half_pi_family(2).unwrap(), &[0.0, 0.5], 1e-15);
        assert_phases_pi(&symmetric_half_pi_family(3).unwrap(), &[0.0, 0.25, 1.0], 1e-15);
        assert_phases_pi(&asymmetric_half_pi_family(2).unwrap(), &[0.0, 2.0 / 3.0], 1e-15);
        assert_phases_pi(&asymmetric_half_pi_family(3).unwrap(), &[0.0, 0.4, 1.6], 1e-15);
        assert!(symmetric_half_pi_family(1).is_err());
        assert!(asymmetric_half_pi_family(0).is_err());
        for n in 2..=8 {
            assert!((p_at(&symmetric_half_pi_family(n).unwrap(), 0.0) - 0.5).abs() < 1e-12);
            assert!((p_at(&asymmetric_half_pi_family(n).unwrap(), 0.0) - 0.5).abs() < 1e-12);
        }
        let areas: Vec<_> = symmetric_half_pi_family(4).unwrap().to_pi_units().iter().map(|x| x.0).collect();
        assert_eq!(areas, vec![0.5, 1.0, 1.0, 0.5]);
    }

    #[test]
    fn twin_rejects_non_half_pi() {
        let seq = s2(&spec(1e-2)).unwrap();
        assert!(matches!(twin(&seq, 0.1), Err(Error::NotHalfPi { .. })));
    }

    #[test]
    fn cp6s_matches_printed_phases() {
        let s = spec(1e-4);
        let t = s.theta() / PI;
        assert_phases_pi(
            &cp6s(&s).unwrap(),
            &[0.0, 0.75, 1.0, 2.0 - t, 1.75 - t, 1.0 - t],
            1e-14,
        );
        let areas: Vec<_> = cp6s(&s).unwrap().to_pi_units().iter().map(|x| x.0).collect();
        assert_eq!(areas, vec![0.5, 1.0, 0.5, 0.5, 1.0, 0.5]);
    }

    #[test]
    fn twinned_symmetric_family_matches_cp6s_profile() {
        // the family member reaches the printed CP6s after time reversal and
        // phase mirroring, which leaves P(ε) unchanged
        let s = spec(1e-4);
        let family = twin(&symmetric_half_pi_family(3).unwrap(), s.theta()).unwrap();
        let printed = cp6s(&s).unwrap();
        for eps in [-0.4, -0.1, 0.2, 0.45] {
            assert!((p_at(&family, eps) - p_at(&printed, eps)).abs() < 1e-16);
        }
    }

    #[test]
    fn cp6a_matches_printed_phases() {
        let s = spec(1e-4);
        let t = s.theta() / PI;
        assert_phases_pi(
            &cp6a(&s).unwrap(),
            &[0.0, 0.4, 1.6, 0.6 - t, 1.4 - t, 1.0 - t],
            1e-14,
        );
    }

    #[test]
    fn twin_hits_target_for_random_half_pi_inputs() {
        // (π/2)_a followed by any phase-shifted identity-like pair keeps P(0) = 1/2
        for (k, theta) in [0.01, 0.2, 1.0, 2.5].iter().enumerate() {
            let c = asymmetric_half_pi_family(2 + k).unwrap().shift_phases(0.3 * k as f64);
            let t = twin(&c, *theta).unwrap();
            assert!((p_at(&t, 0.0) - (theta / 2.0).sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn w3_parameters() {
        let s = spec(1e-4);
        assert!((s.theta() - 0.020_000_333_3).abs() < 1e-10);
        let phi = w3_phase(s.theta());
        assert!((phi - 1.573_980).abs() < 1e-6, "{phi}");
        assert!((w3_phase(0.0) - FRAC_PI_2).abs() < 1e-16);
        let seq = w3(&s).unwrap();
        assert!(gate_distance(&seq, &nominal_gate(&seq), 0.0).unwrap() < 1e-10);
        assert!((p_at(&seq, 0.0) - 1e-4).abs() < 1e-16);
    }

    #[test]
    fn w3_linearization_is_sqrt_p_over_pi() {
        for p in [1e-8, 1e-6, 1e-4] {
            let d = w3_phase_diagnostic(&spec(p));
            let err_over_pi = (d.exact - d.half_pi_plus_sqrt_p_over_pi).abs();
            let err_plain = (d.exact - d.half_pi_plus_sqrt_p).abs();
            assert!(err_over_pi < p, "{p}: {err_over_pi}");
            assert!(err_plain > 0.5 * p.sqrt());
        }
    }

    #[test]
    fn w3_distance_is_second_order() {
        let seq = w3(&spec(1e-2)).unwrap();
        let target = nominal_gate(&seq);
        let d1 = gate_distance(&seq, &target, 0.1).unwrap();
        let d2 = gate_distance(&seq, &target, 0.05).unwrap();
        let ratio = d1 / d2;
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn bb1_is_exact_rotation_at_zero_error() {
        let s = spec(1e-4);
        let seq = bb1(&s).unwrap();
        let target = Unitary2::rotation(s.theta(), 0.0);
        assert!(gate_distance(&seq, &target, 0.0).unwrap() < 1e-10);
        assert!((bb1_phase(0.0) - FRAC_PI_2).abs() < 1e-16);
        assert!((bb1_phase(s.theta()) - (-s.theta() / (4.0 * PI)).acos()).abs() < 1e-16);
        assert_eq!(propagator_error_order(&seq, &target, 8, 1e-9).unwrap(), 3);
    }

    #[test]
    fn bb1_with_half_pi_lead_is_not_a_theta_rotation() {
        // the lead pulse written as (π/2)₀ would give a π/2 rotation
        let s = spec(1e-4);
        let chi = bb1_phase(s.theta());
        let printed = CompositeSequence::from_angles(&[
            (FRAC_PI_2, 0.0),
            (PI, chi),
            (2.0 * PI, 3.0 * chi),
            (PI, chi),
        ])
        .unwrap();
        assert!((p_at(&printed, 0.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn g3_branch_and_limits() {
        let g = g3_parameters(&spec(1e-2)).unwrap();
        assert!((g.x_pi() - 0.0025).abs() < 5e-6);
        assert!((g.y_pi() - 0.05672).abs() < 5e-6);
        for r in g.residuals() {
            assert!(r.abs() < 1e-12);
        }
        let g = g3_parameters(&spec(1e-4)).unwrap();
        assert!((g.x_pi() - 2.5e-5).abs() < 5e-8);
        assert!((g.phi1_pi() - 2.5e-3).abs() < 5e-7);
        assert!((g.y_pi() - 5.683e-3).abs() < 5e-7);
        let g = g3_parameters(&spec(1e-14)).unwrap();
        assert!(g.x_pi().abs() < 1e-12 && g.phi1_pi().abs() < 1e-6 && g.y_pi().abs() < 1e-6);
        for p in [1e-8, 1e-3, 0.1, 0.25] {
            let g = g3_parameters(&spec(p)).unwrap();
            for r in g.residuals() {
                assert!(r.abs() < 1e-10, "{p}: {r}");
            }
            assert!((p_at(&g.sequence().unwrap(), 0.0) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn probability_orders_of_analytic_families() {
        let p = 1e-4;
        let s = spec(p);
        for (seq, m) in [
            (s2(&s).unwrap(), 2),
            (s3(&s).unwrap(), 4),
            (s4a(&s).unwrap(), 4),
            (s4b(&s).unwrap(), 6),
            (cp6s(&s).unwrap(), 8),
            (cp6a(&s).unwrap(), 10),
            (single_pulse(&s).unwrap(), 1),
        ] {
            assert_eq!(probability_error_order(&seq, p, 2 * m + 2, 1e-9).unwrap(), m, "{seq}");
        }
    }

    #[test]
    fn s4a_leading_coefficient() {
        let p = 1e-4;
        let c = probability_series(&s4a(&spec(p)).unwrap(), 6).unwrap();
        assert!((c[0] - p).abs() < 1e-16);
        for k in 1..=3 {
            assert!(c[k].abs() < 1e-15);
        }
        assert!((c[4] + p * PI.powi(4) / 16.0).abs() < 1e-14);
    }
}
