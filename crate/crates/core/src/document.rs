// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

//! The on-disk sequence format and bit-stable JSON/CSV rendering.
//!
//! Angles are stored in units of π. Floating-point numbers are written in
//! scientific notation with 17 significant digits, which round-trips every
//! `f64` exactly and renders identically on every platform.

use std::f64::consts::PI;
use std::io;

use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::profile::SweepRecord;
use crate::su2::{CompositeSequence, Pulse};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct PulseEntry {
    pub area_pi: f64,
    pub phase_pi: f64,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct Metadata {
    pub verified_order: Option<usize>,
    pub total_area_pi: f64,
    /// Whether `verified_order` refers to the propagator rather than the
    /// transition probability.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub gate: bool,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct SequenceDocument {
    pub format_version: u32,
    pub family: String,
    pub target_p: f64,
    pub pulses: Vec<PulseEntry>,
    pub metadata: Metadata,
}

impl SequenceDocument {
    /// Builds a document from a sequence, canonicalizing its phases.
    pub fn new(family: &str, target_p: f64, seq: &CompositeSequence, verified_order: Option<usize>, gate: bool) -> Self {
        let canonical = seq.canonicalize();
        let pulses = canonical
            .to_pi_units()
            .into_iter()
            .map(|(area_pi, phase_pi)| PulseEntry {
                area_pi,
                phase_pi: if phase_pi >= 2.0 { 0.0 } else { phase_pi },
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            family: family.to_string(),
            target_p,
            pulses,
            metadata: Metadata {
                verified_order,
                total_area_pi: canonical.total_area() / PI,
                gate,
            },
        }
    }

    pub fn sequence(&self) -> Result<CompositeSequence> {
        let pulses = self
            .pulses
            .iter()
            .map(|e| Pulse::in_pi_units(e.area_pi, e.phase_pi))
            .collect::<Result<Vec<_>>>()?;
        CompositeSequence::new(pulses)
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        if !(self.target_p > 0.0 && self.target_p <= 1.0) {
            return Err(Error::InvalidArgument(format!("target_p {} outside (0, 1]", self.target_p)));
        }
        for e in &self.pulses {
            if !(e.area_pi.is_finite() && e.area_pi >= 0.0) {
                return Err(Error::InvalidArgument(format!("area_pi {} must be finite and ≥ 0", e.area_pi)));
            }
            if !(e.phase_pi >= 0.0 && e.phase_pi < 2.0) {
                return Err(Error::InvalidArgument(format!("phase_pi {} outside [0, 2)", e.phase_pi)));
            }
        }
        self.sequence().map(|_| ())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("malformed sequence document: {e}")))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Pretty-printing JSON formatter that writes every float with 17
/// significant digits.
pub struct PreciseFormatter {
    inner: PrettyFormatter<'static>,
}

impl Default for PreciseFormatter {
    fn default() -> Self {
        Self { inner: PrettyFormatter::with_indent(b"  ") }
    }
}

/// `f64` in scientific notation with 17 significant digits.
pub fn format_f64(value: f64) -> String {
    if value == 0.0 {
        // keeps −0 and +0 byte-identical
        return "0.0000000000000000e0".to_string();
    }
    format!("{value:.16e}")
}

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes any value with [`PreciseFormatter`], newline-terminated.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter::default());
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub const SWEEP_CSV_HEADER: &str = "epsilon,probability,log10_abs_error";

pub fn sweep_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format_f64(r.epsilon));
        out.push(',');
        out.push_str(&format_f64(r.probability));
        out.push(',');
        out.push_str(&format_f64(r.log10_abs_error));
        out.push('\n');
    }
    out
}
