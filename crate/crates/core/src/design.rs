// Copyright 2026 The cpulse Authors
// SPDX-License-Identifier: Apache-2.0

//! The family catalogue behind `cpulse design`, plus order verification and
//! point evaluation of stored sequences.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::document::SequenceDocument;
use crate::error::{Error, Result};
use crate::families::{self, nominal_gate, DesignSpec};
use crate::series::{
    probability_error_order, probability_series, propagator_error_order, series_propagator, verification_order,
    DEFAULT_TOLERANCE, MAX_ORDER,
};
use crate::solver::{self, AsymmetricProblem};
use crate::su2::{gate_distance, transition_probability, CompositeSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Single,
    S2,
    A2,
    S3,
    A3,
    S4a,
    S4b,
    A4,
    Sym,
    Asym,
    TwinSym,
    TwinAsym,
    W3,
    G3,
    Bb1,
}

impl Family {
    pub const ALL: [Family; 15] = [
        Family::Single,
        Family::S2,
        Family::A2,
        Family::S3,
        Family::A3,
        Family::S4a,
        Family::S4b,
        Family::A4,
        Family::Sym,
        Family::Asym,
        Family::TwinSym,
        Family::TwinAsym,
        Family::W3,
        Family::G3,
        Family::Bb1,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Family::Single => "single",
            Family::S2 => "s2",
            Family::A2 => "a2",
            Family::S3 => "s3",
            Family::A3 => "a3",
            Family::S4a => "s4a",
            Family::S4b => "s4b",
            Family::A4 => "a4",
            Family::Sym => "sym",
            Family::Asym => "asym",
            Family::TwinSym => "twin-sym",
            Family::TwinAsym => "twin-asym",
            Family::W3 => "w3",
            Family::G3 => "g3",
            Family::Bb1 => "bb1",
        }
    }

    /// Families parameterized by a pulse count `N`.
    pub fn takes_n(self) -> bool {
        matches!(self, Family::Sym | Family::Asym | Family::TwinSym | Family::TwinAsym)
    }

    /// Rotation gates, whose order refers to the full propagator.
    pub fn is_gate(self) -> bool {
        matches!(self, Family::W3 | Family::G3 | Family::Bb1)
    }

    /// Half-pi families ignore the target and always produce P(0) = 1/2.
    pub fn is_half_pi(self) -> bool {
        matches!(self, Family::Sym | Family::Asym)
    }

    /// The error order the construction is designed to reach.
    pub fn claimed_order(self, n: Option<usize>) -> Result<usize> {
        let n = if self.takes_n() { Some(check_n(self, n)?) } else { None };
        Ok(match (self, n) {
            (Family::Single, _) => 1,
            (Family::S2, _) => 2,
            (Family::A2, _) => 3,
            (Family::S3 | Family::S4a, _) => 4,
            (Family::A3, _) => 5,
            (Family::S4b, _) => 6,
            (Family::A4, _) => 7,
            (Family::Sym, Some(n)) => 2 * (n - 1),
            (Family::Asym, Some(n)) => 2 * n - 1,
            (Family::TwinSym, Some(n)) => 4 * (n - 1),
            (Family::TwinAsym, Some(n)) => 2 * (2 * n - 1),
            (Family::W3 | Family::G3, _) => 2,
            (Family::Bb1, _) => 3,
            _ => unreachable!("N checked above"),
        })
    }
}

fn check_n(family: Family, n: Option<usize>) -> Result<usize> {
    let n = n.ok_or_else(|| Error::InvalidArgument(format!("family {family} needs --N")))?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("--N must be at least 2, got {n}")));
    }
    let claimed = match family {
        Family::Sym => 2 * (n - 1),
        Family::Asym => 2 * n - 1,
        Family::TwinSym => 4 * (n - 1),
        _ => 2 * (2 * n - 1),
    };
    if n > MAX_ORDER || verification_order(claimed) > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "--N {n} is too large to verify for family {family}"
        )));
    }
    Ok(n)
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.label() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family {s:?}")))
    }
}

/// A constructed sequence with its confirmed error order.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub family: Family,
    pub n: Option<usize>,
    pub target_p: f64,
    pub sequence: CompositeSequence,
    pub claimed_order: usize,
    pub verified_order: usize,
}

impl Design {
    pub fn document(&self) -> SequenceDocument {
        SequenceDocument::new(
            self.family.label(),
            self.target_p,
            &self.sequence,
            Some(self.verified_order),
            self.family.is_gate(),
        )
    }
}

fn asymmetric(n: usize, p: f64) -> Result<CompositeSequence> {
    if n == 2 {
        let problem = AsymmetricProblem::new(2, p)?;
        let seed = problem.unknowns_of(&families::a2_seed(&DesignSpec::new(p)?)?)?;
        if let Ok(report) = solver::solve(&problem, &seed) {
            return Ok(report.sequence);
        }
    }
    Ok(solver::solve_from_tables(n, p)?.sequence)
}

/// Builds and verifies a member of `family` for target probability `p`.
pub fn design(family: Family, p: f64, n: Option<usize>) -> Result<Design> {
    let spec = DesignSpec::new(p)?;
    let claimed_order = family.claimed_order(n)?;
    let n = if family.takes_n() { n } else { None };
    let theta = spec.theta();
    let sequence = match family {
        Family::Single => families::single_pulse(&spec)?,
        Family::S2 => families::s2(&spec)?,
        Family::A2 => asymmetric(2, p)?,
        Family::S3 => families::s3(&spec)?,
        Family::A3 => asymmetric(3, p)?,
        Family::S4a => families::s4a(&spec)?,
        Family::S4b => families::s4b(&spec)?,
        Family::A4 => asymmetric(4, p)?,
        Family::Sym => families::symmetric_half_pi_family(n.expect("checked"))?,
        Family::Asym => families::asymmetric_half_pi_family(n.expect("checked"))?,
        Family::TwinSym => families::twin(&families::symmetric_half_pi_family(n.expect("checked"))?, theta)?,
        Family::TwinAsym => families::twin(&families::asymmetric_half_pi_family(n.expect("checked"))?, theta)?,
        Family::W3 => families::w3(&spec)?,
        Family::G3 => families::g3(&spec)?,
        Family::Bb1 => families::bb1(&spec)?,
    };
    let target_p = if family.is_half_pi() { 0.5 } else { p };
    let verified_order = measured_order(&sequence, target_p, family.is_gate(), verification_order(claimed_order))?;
    Ok(Design {
        family,
        n,
        target_p,
        sequence,
        claimed_order,
        verified_order,
    })
}

fn measured_order(seq: &CompositeSequence, p: f64, gate: bool, order: usize) -> Result<usize> {
    if gate {
        propagator_error_order(seq, &nominal_gate(seq), order, DEFAULT_TOLERANCE)
    } else {
        probability_error_order(seq, p, order, DEFAULT_TOLERANCE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub family: String,
    /// `"probability"` or `"propagator"`.
    pub kind: &'static str,
    pub claimed_order: Option<usize>,
    pub verified_order: usize,
    /// Probability: `c₀ − p` followed by `c₁, c₂, …`. Propagator: the
    /// largest entry of each phase-aligned coefficient matrix of `T − T₀`.
    pub residuals: Vec<f64>,
    pub matches: bool,
}

/// Re-derives the error order of a stored sequence from scratch.
pub fn verify(doc: &SequenceDocument, gate: bool) -> Result<VerifyReport> {
    let seq = doc.sequence()?;
    let gate = gate || doc.metadata.gate;
    let family: Option<Family> = doc.family.parse().ok();
    let claimed_order = match family {
        Some(f) if f.takes_n() => {
            let n = if matches!(f, Family::TwinSym | Family::TwinAsym) { seq.len() / 2 } else { seq.len() };
            f.claimed_order(Some(n)).ok()
        }
        Some(f) => f.claimed_order(None).ok(),
        None => None,
    }
    .filter(|_| gate == family.is_some_and(Family::is_gate))
    .or(doc.metadata.verified_order.filter(|_| gate == doc.metadata.gate));
    let order = verification_order(claimed_order.unwrap_or(MAX_ORDER / 2 - 1)).min(MAX_ORDER);
    let verified_order = measured_order(&seq, doc.target_p, gate, order)?;
    let shown = claimed_order.map_or(verified_order, |c| c.max(verified_order)) + 1;
    let residuals = if gate {
        gate_residuals(&seq, shown.min(order))?
    } else {
        let mut c = probability_series(&seq, shown.min(order))?;
        c[0] -= doc.target_p;
        c
    };
    Ok(VerifyReport {
        family: doc.family.clone(),
        kind: if gate { "propagator" } else { "probability" },
        claimed_order,
        verified_order,
        residuals,
        matches: claimed_order.map_or(true, |c| c == verified_order),
    })
}

fn gate_residuals(seq: &CompositeSequence, order: usize) -> Result<Vec<f64>> {
    let series = series_propagator(seq, order)?;
    let target = nominal_gate(seq);
    let overlap = (target.adjoint() * series.coefficient(0)).trace();
    let phase = if overlap.norm() > 0.0 { overlap.conj() / overlap.norm() } else { 1.0.into() };
    let aligned = series.scale(phase);
    Ok((0..=order)
        .map(|k| {
            let m = aligned.coefficient(k);
            if k == 0 {
                m.frobenius_distance(&target)
            } else {
                m.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub epsilon: f64,
    pub probability: f64,
    pub abs_error: f64,
    pub relative_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate_distance: Option<f64>,
}

/// P(ε) of a stored sequence, with the distance to its nominal gate on
/// request.
pub fn evaluate(doc: &SequenceDocument, epsilon: f64, gate: bool) -> Result<Evaluation> {
    let seq = doc.sequence()?;
    let probability = transition_probability(&seq, epsilon)?;
    let abs_error = (probability - doc.target_p).abs();
    Ok(Evaluation {
        epsilon,
        probability,
        abs_error,
        relative_error: abs_error / doc.target_p,
        gate_distance: if gate {
            Some(gate_distance(&seq, &nominal_gate(&seq), epsilon)?)
        } else {
            None
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn labels_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.label().parse::<Family>().unwrap(), f);
        }
        assert!("s5".parse::<Family>().is_err());
    }

    #[test]
    fn every_family_meets_its_claim() {
        for family in Family::ALL {
            let n = family.takes_n().then_some(3);
            let d = design(family, 1e-4, n).unwrap();
            assert_eq!(d.verified_order, d.claimed_order, "{family}");
        }
        for (family, n) in [(Family::TwinSym, 2), (Family::TwinAsym, 2), (Family::Sym, 4), (Family::Asym, 4)] {
            let d = design(family, 1e-3, Some(n)).unwrap();
            assert_eq!(d.verified_order, d.claimed_order, "{family} {n}");
        }
    }

    #[test]
    fn a2_design_matches_published_row() {
        let d = design(Family::A2, 1e-4, None).unwrap();
        let doc = d.document();
        assert!((doc.pulses[0].area_pi - 0.712599).abs() < 5e-6);
        assert!((doc.pulses[1].area_pi - 0.717704).abs() < 5e-6);
        assert!((doc.pulses[1].phase_pi - (1.0 - 0.004875)).abs() < 5e-6);
        assert_eq!(doc.metadata.verified_order, Some(3));
    }

    #[test]
    fn pulse_counts() {
        assert_eq!(design(Family::S4b, 1e-4, None).unwrap().sequence.len(), 4);
        let t = design(Family::TwinAsym, 1e-4, Some(3)).unwrap();
        assert_eq!((t.sequence.len(), t.verified_order), (6, 10));
    }

    #[test]
    fn argument_errors() {
        assert!(design(Family::Sym, 1e-4, None).is_err());
        assert!(design(Family::Sym, 1e-4, Some(1)).is_err());
        assert!(design(Family::TwinAsym, 1e-4, Some(40)).is_err());
        assert!(matches!(design(Family::S2, 0.3, None), Err(Error::Range { .. })));
        assert!(design(Family::S2, 0.0, None).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let doc = design(Family::S2, 1e-4, None).unwrap().document();
        let e = evaluate(&doc, 0.0, false).unwrap();
        assert!((e.probability - 1e-4).abs() < 1e-16);
        let e = evaluate(&doc, 0.5, false).unwrap();
        assert!((e.probability - 1e-4 * (PI / 4.0).cos().powi(2)).abs() < 1e-16);
        assert!(e.gate_distance.is_none());

        let doc = design(Family::A4, 1e-2, None).unwrap().document();
        assert!(evaluate(&doc, 0.1, false).unwrap().relative_error < 1e-5);

        let doc = design(Family::W3, 1e-2, None).unwrap().document();
        assert!(evaluate(&doc, 0.0, true).unwrap().gate_distance.unwrap() < 1e-10);
    }

    #[test]
    fn verify_reports() {
        let doc = design(Family::S3, 1e-2, None).unwrap().document();
        let r = verify(&doc, false).unwrap();
        assert_eq!((r.claimed_order, r.verified_order, r.matches), (Some(4), 4, true));
        assert_eq!(r.residuals.len(), 6);
        assert!(r.residuals[..4].iter().all(|c| c.abs() < 1e-9 * 1e-2));
        assert!(r.residuals[4].abs() > 1e-9 * 1e-2);

        let doc = design(Family::W3, 1e-2, None).unwrap().document();
        let r = verify(&doc, true).unwrap();
        assert_eq!((r.kind, r.verified_order, r.matches), ("propagator", 2, true));
        assert!(r.residuals[0] < 1e-12 && r.residuals[1] < 1e-9);

        let doc = design(Family::Single, 0.2, None).unwrap().document();
        assert_eq!(verify(&doc, false).unwrap().verified_order, 1);

        // a sequence labelled s4b that is really s2
        let mut doc = design(Family::S2, 1e-4, None).unwrap().document();
        doc.family = "s4b".into();
        let r = verify(&doc, false).unwrap();
        assert_eq!((r.claimed_order, r.verified_order, r.matches), (Some(6), 2, false));
    }
}
