//! Gate-level circuit IR and synthesis passes.
//!
//! The IR is an ordered gate list over a fixed gate set (Clifford + T + RZ +
//! U3 + CX/CCX + single-qubit PHASE) plus an opaque dense-unitary gate that
//! only the simulator understands (used by the exact-evolution mode).
//!
//! Text format: header lines `width=<int>` and `data=<int>`, optional
//! `# key=value` metadata lines, then one gate per line `GATE q0 [q1] [angle]`.

mod coloring;
mod metrics;
mod prep;
mod reflection;
mod synth;
mod trotter;

pub use coloring::{color_layers, Layering};
pub use metrics::{metrics, metrics_with, CcxAccounting, GateMetrics};
pub use prep::singlet_prep_circuit;
pub use reflection::{
    compile_reflection, measurement_free_entangling_count, mid_circuit_avg_entangling_count,
};
pub use synth::{synthesize_dbqite, synthesize_hopf, EvolutionMode, SynthesisConfig};
pub use trotter::{compile_trotter, fused_convention_counts};

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// An opaque dense unitary acting on an explicit qubit list. Only the
/// simulator can execute it; the text format rejects it.
#[derive(Clone)]
pub struct OpaqueUnitary {
    /// Operand qubits; index 0 is the most significant bit of the local
    /// matrix index.
    pub qubits: Vec<usize>,
    pub matrix: Arc<DMatrix<Complex64>>,
    pub label: String,
}

impl fmt::Debug for OpaqueUnitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OpaqueUnitary")
            .field("qubits", &self.qubits)
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// One gate of the IR.
#[derive(Clone, Debug)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    X(usize),
    Rz(usize, f64),
    U3(usize, f64, f64, f64),
    Phase(usize, f64),
    Cx(usize, usize),
    Ccx(usize, usize, usize),
    Unitary(Box<OpaqueUnitary>),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) | Gate::X(q) => {
                vec![*q]
            }
            Gate::Rz(q, _) | Gate::U3(q, _, _, _) | Gate::Phase(q, _) => vec![*q],
            Gate::Cx(c, t) => vec![*c, *t],
            Gate::Ccx(c0, c1, t) => vec![*c0, *c1, *t],
            Gate::Unitary(u) => u.qubits.clone(),
        }
    }

    pub fn is_single_qubit(&self) -> bool {
        matches!(
            self,
            Gate::H(_)
                | Gate::S(_)
                | Gate::Sdg(_)
                | Gate::T(_)
                | Gate::Tdg(_)
                | Gate::X(_)
                | Gate::Rz(..)
                | Gate::U3(..)
                | Gate::Phase(..)
        )
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::H(q) => Gate::H(*q),
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::T(q) => Gate::Tdg(*q),
            Gate::Tdg(q) => Gate::T(*q),
            Gate::X(q) => Gate::X(*q),
            Gate::Rz(q, a) => Gate::Rz(*q, -a),
            Gate::U3(q, theta, phi, lambda) => Gate::U3(*q, -theta, -lambda, -phi),
            Gate::Phase(q, a) => Gate::Phase(*q, -a),
            Gate::Cx(c, t) => Gate::Cx(*c, *t),
            Gate::Ccx(c0, c1, t) => Gate::Ccx(*c0, *c1, *t),
            Gate::Unitary(u) => Gate::Unitary(Box::new(OpaqueUnitary {
                qubits: u.qubits.clone(),
                matrix: Arc::new(u.matrix.adjoint()),
                label: format!("{}^dag", u.label),
            })),
        }
    }
}

/// An ordered gate list over `width` qubits, the first `data_qubits` of which
/// carry the payload state; the rest are ancillas that every gadget must
/// return to `|0⟩`.
#[derive(Clone, Debug)]
pub struct Circuit {
    width: usize,
    data_qubits: usize,
    gates: Vec<Gate>,
    metadata: BTreeMap<String, String>,
}

impl Circuit {
    pub fn new(width: usize, data_qubits: usize) -> Result<Self> {
        if width == 0 || data_qubits == 0 || data_qubits > width {
            return Err(Error::InvalidConfig(format!(
                "need 0 < data_qubits <= width, got data={data_qubits}, width={width}"
            )));
        }
        Ok(Self { width, data_qubits, gates: Vec::new(), metadata: BTreeMap::new() })
    }

    /// A circuit without ancillas.
    pub fn data_only(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data_qubits(&self) -> usize {
        self.data_qubits
    }

    pub fn ancilla_qubits(&self) -> usize {
        self.width - self.data_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn set_metadata(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.insert(key.into(), value.into());
    }

    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata.get(key).map(|s| s.as_str())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= self.width {
                return Err(Error::GateOperands(format!(
                    "qubit {q} out of range for width {}",
                    self.width
                )));
            }
            if qs[..i].contains(&q) {
                return Err(Error::GateOperands(format!("duplicate operand qubit {q}")));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Append another circuit's gates; `other` must fit inside this width.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.width > self.width {
            return Err(Error::DimMismatch(other.width, self.width));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Formal inverse: reversed gate list with every gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            data_qubits: self.data_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn to_text(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!("width={}\n", self.width));
        out.push_str(&format!("data={}\n", self.data_qubits));
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        for g in &self.gates {
            match g {
                Gate::H(q) => out.push_str(&format!("H {q}\n")),
                Gate::S(q) => out.push_str(&format!("S {q}\n")),
                Gate::Sdg(q) => out.push_str(&format!("SDG {q}\n")),
                Gate::T(q) => out.push_str(&format!("T {q}\n")),
                Gate::Tdg(q) => out.push_str(&format!("TDG {q}\n")),
                Gate::X(q) => out.push_str(&format!("X {q}\n")),
                Gate::Rz(q, a) => out.push_str(&format!("RZ {q} {a}\n")),
                Gate::U3(q, t, p, l) => out.push_str(&format!("U3 {q} {t} {p} {l}\n")),
                Gate::Phase(q, a) => out.push_str(&format!("PHASE {q} {a}\n")),
                Gate::Cx(c, t) => out.push_str(&format!("CX {c} {t}\n")),
                Gate::Ccx(c0, c1, t) => out.push_str(&format!("CCX {c0} {c1} {t}\n")),
                Gate::Unitary(_) => return Err(Error::OpaqueGate),
            }
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let mut width: Option<usize> = None;
        let mut data: Option<usize> = None;
        let mut circuit: Option<Circuit> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix("width=") {
                width = Some(rest.parse().map_err(|_| err(format!("bad width {rest:?}")))?);
            } else if let Some(rest) = line.strip_prefix("data=") {
                data = Some(rest.parse().map_err(|_| err(format!("bad data count {rest:?}")))?);
            }
            if circuit.is_none() {
                if let (Some(w), Some(d)) = (width, data) {
                    circuit = Some(Circuit::new(w, d)?);
                }
            }
            if line.starts_with("width=") || line.starts_with("data=") {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                match circuit.as_mut() {
                    Some(c) => {
                        if let Some((k, v)) = rest.trim().split_once('=') {
                            c.set_metadata(k.trim(), v.trim());
                        }
                    }
                    None => return Err(err("metadata line before width=/data= header".into())),
                }
                continue;
            }
            let c = match circuit.as_mut() {
                Some(c) => c,
                None => return Err(err("gate line before width=/data= header".into())),
            };
            let mut parts = line.split_whitespace();
            let name = parts.next().unwrap();
            let toks: Vec<&str> = parts.collect();
            let q = |i: usize| -> Result<usize> {
                toks.get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err(format!("bad qubit operand #{i} for {name}")))
            };
            let a = |i: usize| -> Result<f64> {
                toks.get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err(format!("bad angle operand #{i} for {name}")))
            };
            let expect_len = |n: usize| -> Result<()> {
                if toks.len() != n {
                    return Err(err(format!("{name} takes {n} operands, got {}", toks.len())));
                }
                Ok(())
            };
            let gate = match name {
                "H" => { expect_len(1)?; Gate::H(q(0)?) }
                "S" => { expect_len(1)?; Gate::S(q(0)?) }
                "SDG" => { expect_len(1)?; Gate::Sdg(q(0)?) }
                "T" => { expect_len(1)?; Gate::T(q(0)?) }
                "TDG" => { expect_len(1)?; Gate::Tdg(q(0)?) }
                "X" => { expect_len(1)?; Gate::X(q(0)?) }
                "RZ" => { expect_len(2)?; Gate::Rz(q(0)?, a(1)?) }
                "U3" => { expect_len(4)?; Gate::U3(q(0)?, a(1)?, a(2)?, a(3)?) }
                "PHASE" => { expect_len(2)?; Gate::Phase(q(0)?, a(1)?) }
                "CX" => { expect_len(2)?; Gate::Cx(q(0)?, q(1)?) }
                "CCX" => { expect_len(3)?; Gate::Ccx(q(0)?, q(1)?, q(2)?) }
                other => return Err(err(format!("unknown gate {other:?}"))),
            };
            c.push(gate).map_err(|e| err(e.to_string()))?;
        }
        match circuit {
            Some(c) => Ok(c),
            None => match (width, data) {
                (Some(w), Some(d)) => Circuit::new(w, d),
                _ => Err(Error::Parse("missing width=/data= header".into())),
            },
        }
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Circuit> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text()?)?;
        Ok(())
    }
}
