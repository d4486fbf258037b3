// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated Maclaurin series in the relative area error ε.
//!
//! Each pulse factor is expanded exactly through
//! `cos(A(1+ε)/2) = cos(A/2)·cos(Aε/2) − sin(A/2)·sin(Aε/2)` (and the
//! analogous sine identity), so propagators and probabilities carry exact
//! derivative information up to the truncation order without any finite
//! differencing.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::su2::{CompositeSequence, Pulse, Unitary2};

/// Largest truncation order accepted by the series routines.
pub const MAX_ORDER: usize = 64;

/// Default relative tolerance for error-order extraction.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Imaginary residue of a probability coefficient that is treated as
/// rounding.
const IMAGINARY_RESIDUE: f64 = 1e-12;

/// Truncation order used to confirm a claimed error order `m`: high enough
/// that the first non-vanishing coefficient is not a truncation artifact.
pub const fn verification_order(claimed: usize) -> usize {
    2 * claimed + 2
}

/// A power series `c₀ + c₁ε + … + c_K ε^K`, truncated at order `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    coefficients: Vec<Complex64>,
}

impl TaylorSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coefficients: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coefficients[0] = value;
        s
    }

    pub fn from_coefficients(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidArgument(
                "a series needs at least the constant coefficient".into(),
            ));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("series coefficients must be finite".into()));
        }
        Ok(Self { coefficients })
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> Complex64 {
        self.coefficients[k]
    }

    pub fn conj(&self) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(Complex64::conj).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    /// Evaluates the truncated polynomial at `epsilon` (Horner).
    pub fn evaluate(&self, epsilon: f64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * epsilon + c)
    }

    fn check_same_order(&self, other: &Self) {
        assert_eq!(
            self.order(),
            other.order(),
            "series arithmetic requires equal truncation orders"
        );
    }
}

impl Add for &TaylorSeries {
    type Output = TaylorSeries;

    fn add(self, rhs: &TaylorSeries) -> TaylorSeries {
        self.check_same_order(rhs);
        TaylorSeries {
            coefficients: self
                .coefficients
                .iter()
                .zip(&rhs.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &TaylorSeries {
    type Output = TaylorSeries;

    fn sub(self, rhs: &TaylorSeries) -> TaylorSeries {
        self.check_same_order(rhs);
        TaylorSeries {
            coefficients: self
                .coefficients
                .iter()
                .zip(&rhs.coefficients)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &TaylorSeries {
    type Output = TaylorSeries;

    /// Cauchy product truncated at the common order.
    fn mul(self, rhs: &TaylorSeries) -> TaylorSeries {
        self.check_same_order(rhs);
        let k = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); k + 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients[..=k - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        TaylorSeries { coefficients: out }
    }
}

/// A 2×2 matrix of truncated series, entry-wise expansion of a propagator.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMatrix {
    pub u11: TaylorSeries,
    pub u12: TaylorSeries,
    pub u21: TaylorSeries,
    pub u22: TaylorSeries,
}

impl SeriesMatrix {
    pub fn identity(order: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            u11: TaylorSeries::constant(one, order),
            u12: TaylorSeries::zero(order),
            u21: TaylorSeries::zero(order),
            u22: TaylorSeries::constant(one, order),
        }
    }

    pub fn order(&self) -> usize {
        self.u11.order()
    }

    /// The matrix of order-`k` coefficients.
    pub fn coefficient(&self, k: usize) -> Unitary2 {
        Unitary2::from_entries(
            self.u11.coefficient(k),
            self.u12.coefficient(k),
            self.u21.coefficient(k),
            self.u22.coefficient(k),
        )
    }

    pub fn entries(&self) -> [&TaylorSeries; 4] {
        [&self.u11, &self.u12, &self.u21, &self.u22]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            u11: self.u11.conj(),
            u12: self.u21.conj(),
            u21: self.u12.conj(),
            u22: self.u22.conj(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            u11: self.u11.scale(factor),
            u12: self.u12.scale(factor),
            u21: self.u21.scale(factor),
            u22: self.u22.scale(factor),
        }
    }

    /// Evaluates every entry at `epsilon`.
    pub fn evaluate(&self, epsilon: f64) -> Unitary2 {
        Unitary2::from_entries(
            self.u11.evaluate(epsilon),
            self.u12.evaluate(epsilon),
            self.u21.evaluate(epsilon),
            self.u22.evaluate(epsilon),
        )
    }
}

impl Mul for &SeriesMatrix {
    type Output = SeriesMatrix;

    fn mul(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        SeriesMatrix {
            u11: &(&self.u11 * &rhs.u11) + &(&self.u12 * &rhs.u21),
            u12: &(&self.u11 * &rhs.u12) + &(&self.u12 * &rhs.u22),
            u21: &(&self.u21 * &rhs.u11) + &(&self.u22 * &rhs.u21),
            u22: &(&self.u21 * &rhs.u12) + &(&self.u22 * &rhs.u22),
        }
    }
}

fn check_order(order: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "series order must be in 1..={MAX_ORDER}, got {order}"
        )))
    }
}

/// Exact expansion of one pulse factor about ε = 0.
fn pulse_series(pulse: &Pulse, order: usize) -> SeriesMatrix {
    let half = pulse.area() / 2.0;
    let (s0, c0) = half.sin_cos();
    let mut cos_part = Vec::with_capacity(order + 1);
    let mut sin_part = Vec::with_capacity(order + 1);
    // term = half^k / k!
    let mut term = 1.0;
    for k in 0..=order {
        if k > 0 {
            term *= half / k as f64;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let (ck, sk) = if k % 2 == 0 { (sign * term, 0.0) } else { (0.0, sign * term) };
        cos_part.push(Complex64::new(c0 * ck - s0 * sk, 0.0));
        sin_part.push(Complex64::new(s0 * ck + c0 * sk, 0.0));
    }
    let cos_series = TaylorSeries { coefficients: cos_part };
    let sin_series = TaylorSeries { coefficients: sin_part };
    let minus_i = Complex64::new(0.0, -1.0);
    let e = Complex64::from_polar(1.0, pulse.phase());
    SeriesMatrix {
        u11: cos_series.clone(),
        u12: sin_series.scale(minus_i * e),
        u21: sin_series.scale(minus_i * e.conj()),
        u22: cos_series,
    }
}

/// Entry-wise expansion of `compose(seq, ε)` to order `order`.
pub fn series_propagator(seq: &CompositeSequence, order: usize) -> Result<SeriesMatrix> {
    check_order(order)?;
    Ok(seq
        .pulses()
        .iter()
        .fold(SeriesMatrix::identity(order), |acc, p| &pulse_series(p, order) * &acc))
}

/// Expansion of `P(ε) = |U₁₂(ε)|²`; coefficients are real.
pub fn probability_series(seq: &CompositeSequence, order: usize) -> Result<Vec<f64>> {
    let u = series_propagator(seq, order)?;
    probability_from_propagator(&u)
}

/// `U₁₂ · conj(U₁₂)` for an already expanded propagator.
pub fn probability_from_propagator(u: &SeriesMatrix) -> Result<Vec<f64>> {
    let square = &u.u12 * &u.u12.conj();
    square
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if c.im.abs() <= IMAGINARY_RESIDUE * c.re.abs().max(1.0) {
                Ok(c.re)
            } else {
                Err(Error::InternalConsistency(format!(
                    "probability coefficient {k} has imaginary part {:e}",
                    c.im
                )))
            }
        })
        .collect()
}

/// Order at which `P(ε)` first departs from `p`.
///
/// Requires `|c₀ − p| ≤ tol·p`, then returns the smallest `m ≥ 1` with
/// `|c_m| > tol·p`. A return value of `order + 1` means no departure was
/// seen through the truncation order, i.e. the error order is at least
/// `order + 1`.
pub fn probability_error_order(
    seq: &CompositeSequence,
    target_p: f64,
    order: usize,
    tol: f64,
) -> Result<usize> {
    if !(target_p > 0.0 && target_p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target probability must lie in (0, 1), got {target_p}"
        )));
    }
    let c = probability_series(seq, order)?;
    let deviation = (c[0] - target_p).abs();
    if deviation > tol * target_p.max(1e-300) {
        return Err(Error::TargetMismatch { deviation });
    }
    Ok(first_departure(&c[1..], tol * target_p).unwrap_or(order + 1))
}

/// Order at which the propagator first departs from `target` (up to a
/// constant global phase). Return semantics as for
/// [`probability_error_order`]; `tol` is absolute.
pub fn propagator_error_order(
    seq: &CompositeSequence,
    target: &Unitary2,
    order: usize,
    tol: f64,
) -> Result<usize> {
    let u = series_propagator(seq, order)?;
    let leading = u.coefficient(0);
    let overlap = (target.adjoint() * leading).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap.conj() / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let aligned = u.scale(phase);
    let deviation = aligned.coefficient(0).frobenius_distance(target);
    if deviation > tol {
        return Err(Error::TargetMismatch { deviation });
    }
    for l in 1..=order {
        let worst = aligned
            .coefficient(l)
            .entries()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if worst > tol {
            return Ok(l);
        }
    }
    Ok(order + 1)
}

fn first_departure(coefficients: &[f64], threshold: f64) -> Option<usize> {
    coefficients
        .iter()
        .position(|c| c.abs() > threshold)
        .map(|i| i + 1)
}
