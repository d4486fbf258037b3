// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

//! Published parameter tables, kept verbatim as regression anchors.
//!
//! All angles are in units of π, exactly as printed. Rows are ordered from
//! p = 10⁻² down to p = 10⁻⁸ (10⁻⁶ for G3).

/// One printed row: the target probability and its columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub p: f64,
    pub columns: &'static [f64],
}

const fn row(p: f64, columns: &'static [f64]) -> TableRow {
    TableRow { p, columns }
}

/// Two-pulse asymmetric sequence: columns `A₁, A₂, φ`, with `φ₂ = π − φ`.
pub const TWO_PULSE: [TableRow; 7] = [
    row(1e-2, &[0.689806, 0.741105, 0.048767]),
    row(1e-3, &[0.707103, 0.723255, 0.015417]),
    row(1e-4, &[0.712599, 0.717704, 0.004875]),
    row(1e-5, &[0.714341, 0.715956, 0.001542]),
    row(1e-6, &[0.714894, 0.715404, 4.88e-4]),
    row(1e-7, &[0.715068, 0.715229, 1.54e-4]),
    row(1e-8, &[0.715123, 0.715174, 4.88e-5]),
];

/// Three-pulse asymmetric sequence: columns `A₁, A₂, A₃, φ₂, φ₃`.
pub const THREE_PULSE: [TableRow; 7] = [
    row(1e-2, &[0.5682, 1.2436, 0.6292, 1.1533, 0.2546]),
    row(1e-3, &[0.5904, 1.2276, 0.6232, 1.0785, 0.1405]),
    row(1e-4, &[0.6001, 1.2229, 0.6184, 1.0419, 0.0785]),
    row(1e-5, &[0.6049, 1.2214, 0.6151, 1.0229, 0.0441]),
    row(1e-6, &[0.6074, 1.2209, 0.6131, 1.0126, 0.0248]),
    row(1e-7, &[0.6087, 1.2208, 0.6119, 1.0070, 0.0139]),
    row(1e-8, &[0.6094, 1.2207, 0.6113, 1.0039, 0.0078]),
];

/// Four-pulse asymmetric sequence: columns `A₁…A₄, φ₂, φ₃, φ₄`.
///
/// The 10⁻⁷ and 10⁻⁸ rows list the phase-mirrored solution (φ → −φ),
/// which has the same P(ε).
pub const FOUR_PULSE: [TableRow; 7] = [
    row(1e-2, &[0.5367, 1.1586, 1.1360, 0.5833, 0.8499, 1.5547, 0.4360]),
    row(1e-3, &[0.8685, 1.0434, 0.3702, 0.5174, 1.0634, 0.8847, 0.0128]),
    row(1e-4, &[0.8165, 0.9044, 0.5579, 0.6423, 1.0362, 0.9682, 0.0146]),
    row(1e-5, &[0.7854, 0.8335, 0.6433, 0.6905, 1.0207, 0.9856, 0.0090]),
    row(1e-6, &[0.7669, 0.7937, 0.6875, 0.7141, 1.0118, 0.9926, 0.0052]),
    row(1e-7, &[0.7551, 0.7698, 0.7108, 0.7255, 0.9933, 1.0042, 1.9972]),
    row(1e-8, &[0.7494, 0.7578, 0.7244, 0.7328, 0.9962, 1.0022, 1.9984]),
];

/// G3 rotation gate `(π/2 + x)_{φ₁} π_{π+y} (π/2 + x)_{φ₁}`: columns
/// `x, φ₁, y`.
pub const G3: [TableRow; 5] = [
    row(1e-2, &[2.5e-3, 2.492e-2, 5.672e-2]),
    row(1e-3, &[2.5e-4, 7.904e-3, 1.797e-2]),
    row(1e-4, &[2.5e-5, 2.500e-3, 5.683e-3]),
    row(1e-5, &[2.5e-6, 7.906e-4, 1.797e-3]),
    row(1e-6, &[2.5e-7, 2.500e-4, 5.684e-4]),
];

/// Published rows for the asymmetric sequence of `n` pulses.
pub fn asymmetric_rows(n: usize) -> Option<&'static [TableRow]> {
    match n {
        2 => Some(&TWO_PULSE),
        3 => Some(&THREE_PULSE),
        4 => Some(&FOUR_PULSE),
        _ => None,
    }
}

/// Solver unknowns `[A₁…Aₙ, φ₂…φₙ]` (units of π) for a printed row.
pub fn unknowns_pi(n: usize, row: &TableRow) -> Vec<f64> {
    let mut v = row.columns.to_vec();
    if n == 2 {
        v[2] = 1.0 - v[2];
    }
    v
}
