// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

//! Composite pulse sequences that produce small, pre-selected two-level
//! transition probabilities robust to pulse-area errors.
//!
//! The crate is organized bottom-up:
//!
//! - [`su2`]: exact propagators of resonant pulses and their products.
//! - [`series`]: truncated Maclaurin series in the area error ε, used to
//!   read off error orders exactly.
//! - [`families`]: analytic constructors (S2, S3, S4a, S4b, the π/2
//!   families, twinning, W3, G3, BB1).
//! - [`solver`]: damped Newton derivation of the asymmetric A2/A3/A4
//!   sequences, with continuation in the target probability.
//! - [`profile`]: robustness sweeps, window widths and comparison tables.
//! - [`document`], [`design`], [`reproduce`]: the serialization and
//!   command layer used by the `cpulse` binary.

pub mod design;
pub mod document;
pub mod error;
pub mod families;
pub mod series;
pub mod su2;
pub mod profile;
pub mod reproduce;
pub mod solver;
pub mod tables;
mod roots;

pub use error::{Error, Result};
pub use su2::{compose, gate_distance, pulse_propagator, transition_probability, CompositeSequence, Pulse, Unitary2};
