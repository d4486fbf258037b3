// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the propagator, series, design and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input was non-finite, out of its domain, or structurally invalid.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A target probability outside the range a constructor supports.
    #[error("target probability {p} outside supported range {range}")]
    Range { p: f64, range: &'static str },

    /// A numerical result violated an invariant by more than rounding allows.
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),

    /// The zeroth-order term of a sequence does not match the stated target.
    #[error("zeroth-order mismatch against target: deviation {deviation:e}")]
    TargetMismatch { deviation: f64 },

    /// `twin` was handed a sequence that does not produce P(0) = 1/2.
    #[error("sequence is not a half-pi sequence: P(0) = {p0}")]
    NotHalfPi { p0: f64 },

    /// An iterative solve did not reach its tolerance.
    #[error("solver failure at p = {p:e}: best residual {residual:e} after {iterations} iterations")]
    SolverFailure {
        p: f64,
        residual: f64,
        iterations: usize,
    },

    /// The Newton Jacobian was singular at the seed or an iterate.
    #[error("degenerate seed: singular Jacobian at p = {p:e}")]
    DegenerateSeed { p: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {value}")))
    }
}
