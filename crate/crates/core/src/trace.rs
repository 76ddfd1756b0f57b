//! Serialisable views of sequences, frames and spectra.
//!
//! Matrices use the `{"n": .., "entries": [[[re, im], ..], ..]}` wire form.
//! Floats are written in Rust's shortest round-trip form, so re-parsing any
//! output reproduces the same bits.

use std::fmt::Write as _;

use serde::Serialize;

use crate::complexmat::{Matrix, C64};
use crate::eig::{EigenCluster, SpectrumKind};
use crate::error::Result;
use crate::gateseq::{Eigenframe, SequenceState};
use crate::hamcay::{cayley_spectral, hamiltonian_from_frame};

/// Optional per-step payloads.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EmitFlags {
    pub frames: bool,
    pub hamiltonians: bool,
    pub cayleys: bool,
    pub spectra: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    pub multiplicity: usize,
    pub basis: Vec<Vec<[f64; 2]>>,
}

impl From<&EigenCluster> for ClusterRecord {
    fn from(cl: &EigenCluster) -> Self {
        let (phase, value) = match cl.kind {
            SpectrumKind::Unitary => (Some(cl.value), None),
            SpectrumKind::Hermitian => (None, Some(cl.value)),
        };
        ClusterRecord {
            phase,
            value,
            multiplicity: cl.multiplicity,
            basis: cl.basis.iter().map(|v| pairs(v)).collect(),
        }
    }
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameRecord {
    pub kind: SpectrumKind,
    pub columns: Matrix,
    pub phases: Vec<f64>,
    pub permutation: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<ClusterRecord>>,
}

impl FrameRecord {
    pub fn new(frame: &Eigenframe, with_spectrum: bool) -> Self {
        FrameRecord {
            kind: frame.kind,
            columns: frame.columns.clone(),
            phases: frame.phases.clone(),
            permutation: frame.permutation.clone(),
            spectrum: with_spectrum.then(|| frame.clusters.iter().map(ClusterRecord::from).collect()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StateRecord {
    pub k: usize,
    pub hs_dist_prev: Option<f64>,
    pub d_prev: Option<f64>,
    pub u: Matrix,
    pub phases: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<Matrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Matrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<ClusterRecord>>,
}

impl StateRecord {
    pub fn new(state: &SequenceState, emit: EmitFlags) -> Result<Self> {
        let frame = &state.frame;
        Ok(StateRecord {
            k: state.k,
            hs_dist_prev: state.hs_dist_prev,
            d_prev: state.d_prev,
            u: state.u.clone(),
            phases: frame.phases.clone(),
            frame: emit.frames.then(|| FrameRecord::new(frame, false)),
            hamiltonian: if emit.hamiltonians {
                Some(hamiltonian_from_frame(frame)?.into_inner())
            } else {
                None
            },
            cayley: if emit.cayleys { Some(cayley_spectral(frame)?) } else { None },
            spectrum: emit
                .spectra
                .then(|| frame.clusters.iter().map(ClusterRecord::from).collect()),
        })
    }
}

pub fn trace_records(states: &[SequenceState], emit: EmitFlags) -> Result<Vec<StateRecord>> {
    states.iter().map(|s| StateRecord::new(s, emit)).collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:?}")).unwrap_or_default()
}

/// Header `k,hs_dist_prev,d_prev,re_u_1_1,im_u_1_1,…` (row-major, 1-based).
pub fn trace_csv_header(n: usize) -> String {
    let mut h = String::from("k,hs_dist_prev,d_prev");
    for i in 1..=n {
        for j in 1..=n {
            let _ = write!(h, ",re_u_{i}_{j},im_u_{i}_{j}");
        }
    }
    h
}

/// One line per state: `k, hs_dist_prev, d_prev` then the `2n²` real and
/// imaginary parts of `U_k`, row-major. Absent distances are empty fields.
pub fn trace_csv(states: &[SequenceState]) -> String {
    let n = states.first().map_or(0, |s| s.u.dim());
    let mut out = trace_csv_header(n);
    out.push('\n');
    for s in states {
        let _ = write!(out, "{},{},{}", s.k, opt(s.hs_dist_prev), opt(s.d_prev));
        push_entries(&mut out, &s.u);
        out.push('\n');
    }
    out
}

/// Appends `,re,im` for every entry of `m`, row-major.
pub fn push_entries(out: &mut String, m: &Matrix) {
    for z in m.as_slice() {
        let _ = write!(out, ",{:?},{:?}", z.re, z.im);
    }
}

/// Matrix as CSV: one line per row, `re,im` pairs side by side.
pub fn matrix_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        let line: Vec<String> = m.row(i).iter().map(|z| format!("{:?},{:?}", z.re, z.im)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Readable fixed-width rendering.
pub fn matrix_pretty(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        let cells: Vec<String> = m
            .row(i)
            .iter()
            .map(|z| format!("{:>11.8} {:+.8}i", z.re, z.im))
            .collect();
        out.push_str(&cells.join("   "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::{gate, Gate};
    use crate::config::ToleranceConfig;
    use crate::gateseq::iterate_sequence;

    #[test]
    fn csv_layout() {
        let (states, _) = iterate_sequence(&gate(Gate::SigmaX), 2, &ToleranceConfig::default()).unwrap();
        let csv = trace_csv(&states);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("k,hs_dist_prev,d_prev,re_u_1_1,im_u_1_1,re_u_1_2"));
        assert_eq!(lines[0].split(',').count(), 3 + 8);
        assert_eq!(lines[1], "0,,,0.0,0.0,1.0,0.0,1.0,0.0,0.0,0.0");
        let fields: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(fields.len(), 11);
        let d: f64 = fields[1].parse().unwrap();
        assert!((d - (4.0 - 2.0 * std::f64::consts::SQRT_2).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn state_record_emits_requested_payloads() {
        let (states, _) = iterate_sequence(&gate(Gate::SigmaX), 1, &ToleranceConfig::default()).unwrap();
        let emit = EmitFlags {
            hamiltonians: true,
            spectra: true,
            ..Default::default()
        };
        let rec = StateRecord::new(&states[0], emit).unwrap();
        assert!(rec.hamiltonian.is_some() && rec.spectrum.is_some());
        assert!(rec.cayley.is_none() && rec.frame.is_none());
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["spectrum"][1]["multiplicity"], 1);
        assert!(json["spectrum"][0]["phase"].is_number());
        assert!(json.get("cayley").is_none());
    }
}
