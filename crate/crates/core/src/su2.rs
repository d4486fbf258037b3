// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

//! Resonant-pulse propagators and their composition.
//!
//! A pulse of nominal area `A` and phase `φ` subject to a relative area
//! error `ε` propagates the two-level amplitudes by
//!
//! ```text
//! U(A, φ; ε) = [[ cos a,            -i e^{iφ} sin a ],
//!               [ -i e^{-iφ} sin a,  cos a          ]],   a = A(1+ε)/2
//! ```
//!
//! and a sequence `(A₁)_{φ₁} … (Aₙ)_{φₙ}` composes right to left:
//! `Uₙ ⋯ U₂ U₁`. The same ε applies to every pulse.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Overshoot of |U₁₂|² above 1 (or below 0) that is treated as rounding.
pub const PROBABILITY_CLAMP: f64 = 1e-12;

/// Tolerance for accepting a user-provided matrix as SU(2).
pub const UNITARY_TOLERANCE: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_phase(phase: f64) -> f64 {
    let wrapped = phase.rem_euclid(TAU);
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Wraps an angle difference into `(-π, π]`.
pub fn wrap_difference(delta: f64) -> f64 {
    let w = normalize_phase(delta);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// One resonant pulse: nominal area (radians, non-negative) and phase
/// (radians, stored in `[0, 2π)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    area: f64,
    phase: f64,
}

impl Pulse {
    pub fn new(area: f64, phase: f64) -> Result<Self> {
        ensure_finite("pulse area", area)?;
        ensure_finite("pulse phase", phase)?;
        if area < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "pulse area must be non-negative, got {area}"
            )));
        }
        Ok(Self {
            area,
            phase: normalize_phase(phase),
        })
    }

    /// Builds a pulse from an unconstrained area. A negative area is mapped
    /// to `(-A)_{φ+π}`, which has the identical propagator for every ε.
    pub fn from_signed(area: f64, phase: f64) -> Result<Self> {
        if area < 0.0 {
            Self::new(-area, phase + PI)
        } else {
            Self::new(area, phase)
        }
    }

    /// Convenience constructor taking both angles in units of π.
    pub fn in_pi_units(area_pi: f64, phase_pi: f64) -> Result<Self> {
        Self::new(area_pi * PI, phase_pi * PI)
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub(crate) fn with_phase(self, phase: f64) -> Self {
        Self {
            area: self.area,
            phase: normalize_phase(phase),
        }
    }
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}π)_{{{:.6}π}}", self.area / PI, self.phase / PI)
    }
}

/// An ordered, non-empty list of pulses; pulse 1 acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeSequence {
    pulses: Vec<Pulse>,
}

impl CompositeSequence {
    pub fn new(pulses: Vec<Pulse>) -> Result<Self> {
        if pulses.is_empty() {
            return Err(Error::InvalidArgument(
                "a composite sequence needs at least one pulse".into(),
            ));
        }
        Ok(Self { pulses })
    }

    /// Builds a sequence from `(area, phase)` pairs in radians.
    pub fn from_angles(pairs: &[(f64, f64)]) -> Result<Self> {
        let pulses = pairs
            .iter()
            .map(|&(a, p)| Pulse::new(a, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pulses)
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.pulses.iter().map(Pulse::area).sum()
    }

    /// Subtracts the first phase from every phase so that `φ₁ = 0`.
    pub fn canonicalize(&self) -> Self {
        let offset = self.pulses[0].phase;
        self.shift_phases(-offset)
    }

    pub fn is_canonical(&self) -> bool {
        self.pulses[0].phase == 0.0
    }

    /// Adds `delta` to every phase.
    pub fn shift_phases(&self, delta: f64) -> Self {
        Self {
            pulses: self
                .pulses
                .iter()
                .map(|p| p.with_phase(p.phase + delta))
                .collect(),
        }
    }

    /// The same pulses applied in the opposite time order.
    pub fn reversed(&self) -> Self {
        Self {
            pulses: self.pulses.iter().rev().copied().collect(),
        }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut pulses = self.pulses.clone();
        pulses.extend_from_slice(&other.pulses);
        Self { pulses }
    }

    /// Areas and phases in units of π.
    pub fn to_pi_units(&self) -> Vec<(f64, f64)> {
        self.pulses
            .iter()
            .map(|p| (p.area / PI, p.phase / PI))
            .collect()
    }
}

impl fmt::Display for CompositeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pulses.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A 2×2 complex matrix `[[u11, u12], [u21, u22]]`, used for SU(2)
/// propagators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    pub u11: Complex64,
    pub u12: Complex64,
    pub u21: Complex64,
    pub u22: Complex64,
}

impl Unitary2 {
    pub const IDENTITY: Self = Self {
        u11: Complex64::new(1.0, 0.0),
        u12: Complex64::new(0.0, 0.0),
        u21: Complex64::new(0.0, 0.0),
        u22: Complex64::new(1.0, 0.0),
    };

    /// Validating constructor for externally supplied targets.
    pub fn new(u11: Complex64, u12: Complex64, u21: Complex64, u22: Complex64) -> Result<Self> {
        for z in [u11, u12, u21, u22] {
            ensure_finite("matrix entry", z.re)?;
            ensure_finite("matrix entry", z.im)?;
        }
        let u = Self::from_entries(u11, u12, u21, u22);
        let unitarity = u.unitarity_defect();
        let det = (u.determinant() - 1.0).norm();
        if unitarity > UNITARY_TOLERANCE || det > UNITARY_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "matrix is not in SU(2): unitarity defect {unitarity:e}, |det - 1| = {det:e}"
            )));
        }
        Ok(u)
    }

    pub(crate) const fn from_entries(
        u11: Complex64,
        u12: Complex64,
        u21: Complex64,
        u22: Complex64,
    ) -> Self {
        Self { u11, u12, u21, u22 }
    }

    /// The error-free propagator of a single `(A)_φ` pulse.
    pub fn rotation(area: f64, phase: f64) -> Self {
        let half = area / 2.0;
        let (s, c) = half.sin_cos();
        let e = Complex64::from_polar(1.0, phase);
        Self {
            u11: Complex64::new(c, 0.0),
            u12: -I * e * s,
            u21: -I * e.conj() * s,
            u22: Complex64::new(c, 0.0),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            u11: self.u11.conj(),
            u12: self.u21.conj(),
            u21: self.u12.conj(),
            u22: self.u22.conj(),
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.u11 * self.u22 - self.u12 * self.u21
    }

    pub fn trace(&self) -> Complex64 {
        self.u11 + self.u22
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            u11: self.u11 * factor,
            u12: self.u12 * factor,
            u21: self.u21 * factor,
            u22: self.u22 * factor,
        }
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.u11, self.u12, self.u21, self.u22]
    }

    /// Max-abs entry of `U†U − 1`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.adjoint() * *self;
        let d = [
            g.u11 - 1.0,
            g.u12,
            g.u21,
            g.u22 - 1.0,
        ];
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-abs deviation from the SU(2) structure `u11 = u22*`,
    /// `u12 = −u21*`.
    pub fn structure_defect(&self) -> f64 {
        let a = (self.u11 - self.u22.conj()).norm();
        let b = (self.u12 + self.u21.conj()).norm();
        a.max(b)
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `min_ψ ‖self − e^{iψ} other‖_F`, with ψ taken from the phase of
    /// `tr(other† · self)`.
    pub fn phase_invariant_distance(&self, other: &Self) -> f64 {
        let overlap = (other.adjoint() * *self).trace();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.frobenius_distance(&other.scale(phase))
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        Unitary2 {
            u11: self.u11 * rhs.u11 + self.u12 * rhs.u21,
            u12: self.u11 * rhs.u12 + self.u12 * rhs.u22,
            u21: self.u21 * rhs.u11 + self.u22 * rhs.u21,
            u22: self.u21 * rhs.u12 + self.u22 * rhs.u22,
        }
    }
}

/// Propagator of one pulse whose area is scaled by `1 + epsilon`.
pub fn pulse_propagator(pulse: &Pulse, epsilon: f64) -> Result<Unitary2> {
    ensure_finite("epsilon", epsilon)?;
    Ok(Unitary2::rotation(pulse.area * (1.0 + epsilon), pulse.phase))
}

/// `U(Aₙ,φₙ) ⋯ U(A₁,φ₁)` with every pulse at the same relative error.
pub fn compose(seq: &CompositeSequence, epsilon: f64) -> Result<Unitary2> {
    ensure_finite("epsilon", epsilon)?;
    Ok(seq.pulses.iter().fold(Unitary2::IDENTITY, |acc, p| {
        Unitary2::rotation(p.area * (1.0 + epsilon), p.phase) * acc
    }))
}

/// `|U₁₂|²` of the composed propagator.
pub fn transition_probability(seq: &CompositeSequence, epsilon: f64) -> Result<f64> {
    let u = compose(seq, epsilon)?;
    clamp_probability(u.u12.norm_sqr())
}

pub(crate) fn clamp_probability(p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else if p > 1.0 && p - 1.0 <= PROBABILITY_CLAMP {
        Ok(1.0)
    } else if p < 0.0 && -p <= PROBABILITY_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::InternalConsistency(format!(
            "probability {p} outside [0, 1]"
        )))
    }
}

/// Global-phase-invariant Frobenius distance between the composed
/// propagator and `target`.
pub fn gate_distance(seq: &CompositeSequence, target: &Unitary2, epsilon: f64) -> Result<f64> {
    Ok(compose(seq, epsilon)?.phase_invariant_distance(target))
}
