//! Recursive DB-QITE circuit synthesis.
//!
//! Level `k+1` of the group-commutator circuit wraps the level-`k` circuit:
//!
//! ```text
//! U_{k+1} = e^{iθ_H H} · U_k · R(θ_R) · U_k† · e^{-iθ_H H} · U_k
//! ```
//!
//! with `θ_H = √(αβ s_k)/α`, `θ_R = √(αβ s_k)/β`, and `R` the reflection
//! gadget `e^{iθ|0...0⟩⟨0...0|}`; conjugating `R` by `U_k` realizes the
//! rank-one phase on `|ω_k⟩`. Three `U_k` copies per level give `3^k`
//! state-prep queries. The HOPF variant chains five `U_k` copies (two
//! conjugated reflections plus the trailing copy), hence `5^k` queries, and
//! uses no rescaling.
//!
//! Hamiltonian exponentials compile either as second-order Trotter circuits
//! (`EvolutionMode::Trotter`) or as single opaque dense-unitary gates
//! (`EvolutionMode::Exact`), the latter usable only in simulation — it
//! isolates product-formula error from Trotter error in equivalence tests.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::circuit::{compile_reflection, compile_trotter, Circuit, Gate, OpaqueUnitary};
use crate::dense::{eigh, to_dense, EigenSystem};
use crate::engine::hopf_phi;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// How `e^{iθH}` factors are realized.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum EvolutionMode {
    Trotter { steps: usize },
    Exact,
}

impl Default for EvolutionMode {
    fn default() -> Self {
        EvolutionMode::Trotter { steps: 2 }
    }
}

impl EvolutionMode {
    fn label(&self) -> String {
        match self {
            EvolutionMode::Trotter { steps } => format!("trotter2x{steps}"),
            EvolutionMode::Exact => "exact".into(),
        }
    }
}

/// Synthesis parameters; `(alpha, beta)` must match the engine configuration
/// for circuit/engine equivalence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisConfig {
    pub mode: EvolutionMode,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self { mode: EvolutionMode::default(), alpha: 10.0, beta: 1.0 }
    }
}

enum Evolver {
    Trotter { steps: usize },
    Exact { eigen: EigenSystem },
}

impl Evolver {
    fn new(h: &PauliSum, mode: EvolutionMode) -> Result<Self> {
        match mode {
            EvolutionMode::Trotter { steps } => {
                if steps == 0 {
                    return Err(Error::InvalidConfig("Trotter step count must be at least 1".into()));
                }
                Ok(Evolver::Trotter { steps })
            }
            EvolutionMode::Exact => Ok(Evolver::Exact { eigen: eigh(&to_dense(h)?)? }),
        }
    }

    /// Circuit for `e^{iθH}` on the data qubits.
    fn circuit(&self, h: &PauliSum, theta: f64) -> Result<Circuit> {
        match self {
            Evolver::Trotter { steps } => compile_trotter(h, theta, *steps, 2),
            Evolver::Exact { eigen } => {
                let mut c = Circuit::data_only(h.n())?;
                c.push(Gate::Unitary(Box::new(OpaqueUnitary {
                    qubits: (0..h.n()).collect(),
                    matrix: Arc::new(eigen.exp_unitary(theta).into_matrix()),
                    label: format!("expH({theta})"),
                })))?;
                Ok(c)
            }
        }
    }
}

/// Synthesize the recursion-depth-`k` group-commutator DB-QITE circuit.
///
/// `u0` prepares `|ω₀⟩` from `|0...0⟩` on the data qubits (no ancillas);
/// `schedule` supplies the step sizes `s_0 .. s_{k-1}`.
pub fn synthesize_dbqite(
    u0: &Circuit,
    h: &PauliSum,
    schedule: &[f64],
    k: usize,
    cfg: &SynthesisConfig,
) -> Result<Circuit> {
    synthesize(u0, h, schedule, k, cfg, Formula::Gc)
}

/// Synthesize the recursion-depth-`k` HOPF DB-QITE circuit.
pub fn synthesize_hopf(
    u0: &Circuit,
    h: &PauliSum,
    schedule: &[f64],
    k: usize,
    cfg: &SynthesisConfig,
) -> Result<Circuit> {
    synthesize(u0, h, schedule, k, cfg, Formula::Hopf)
}

#[derive(Clone, Copy, PartialEq)]
enum Formula {
    Gc,
    Hopf,
}

fn synthesize(
    u0: &Circuit,
    h: &PauliSum,
    schedule: &[f64],
    k: usize,
    cfg: &SynthesisConfig,
    formula: Formula,
) -> Result<Circuit> {
    let n = h.n();
    if u0.width() != n || u0.data_qubits() != n {
        return Err(Error::InvalidConfig(format!(
            "u0 must be an ancilla-free circuit on the {n} data qubits, got width={} data={}",
            u0.width(),
            u0.data_qubits()
        )));
    }
    if schedule.len() < k {
        return Err(Error::ScheduleLength { need: k, got: schedule.len() });
    }
    if let Some(&bad) = schedule[..k].iter().find(|&&s| s < 0.0) {
        return Err(Error::NegativeStep(bad));
    }
    if !(cfg.alpha > 0.0 && cfg.beta > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "rescale factors must be positive, got alpha={}, beta={}",
            cfg.alpha, cfg.beta
        )));
    }

    let queries_per_level: u64 = match formula {
        Formula::Gc => 3,
        Formula::Hopf => 5,
    };
    let label = match formula {
        Formula::Gc => "gc",
        Formula::Hopf => "hopf",
    };

    if k == 0 {
        let mut out = u0.clone();
        annotate(&mut out, label, cfg, 0, 1, &[]);
        return Ok(out);
    }

    let evolver = Evolver::new(h, cfg.mode)?;
    let width = n + n.saturating_sub(1); // shared ancilla block for the reflections
    let mut current = Circuit::new(width, n)?;
    current.append(u0)?;

    for &s in &schedule[..k] {
        let mut next = Circuit::new(width, n)?;
        match formula {
            Formula::Gc => {
                let root = (cfg.alpha * cfg.beta * s).sqrt();
                let theta_h = root / cfg.alpha;
                let theta_r = root / cfg.beta;
                next.append(&current)?;
                next.append(&evolver.circuit(h, -theta_h)?)?;
                next.append(&current.inverse())?;
                next.append(&compile_reflection(n, theta_r)?)?;
                next.append(&current)?;
                next.append(&evolver.circuit(h, theta_h)?)?;
            }
            Formula::Hopf => {
                let root = s.sqrt();
                let phi = hopf_phi();
                next.append(&current)?;
                next.append(&evolver.circuit(h, (1.0 - phi) * root)?)?;
                next.append(&current.inverse())?;
                next.append(&compile_reflection(n, -(1.0 + phi) * root)?)?;
                next.append(&current)?;
                next.append(&evolver.circuit(h, -root)?)?;
                next.append(&current.inverse())?;
                next.append(&compile_reflection(n, phi * root)?)?;
                next.append(&current)?;
                next.append(&evolver.circuit(h, phi * root)?)?;
            }
        }
        current = next;
    }

    let queries = queries_per_level.pow(k as u32);
    annotate(&mut current, label, cfg, k, queries, &schedule[..k]);
    Ok(current)
}

fn annotate(
    c: &mut Circuit,
    formula: &str,
    cfg: &SynthesisConfig,
    k: usize,
    queries: u64,
    schedule: &[f64],
) {
    c.set_metadata("synthesis", "dbqite");
    c.set_metadata("formula", formula);
    c.set_metadata("k", k.to_string());
    c.set_metadata("u0_queries", queries.to_string());
    c.set_metadata("mode", cfg.mode.label());
    c.set_metadata("alpha", cfg.alpha.to_string());
    c.set_metadata("beta", cfg.beta.to_string());
    let sched: Vec<String> = schedule.iter().map(|s| s.to_string()).collect();
    c.set_metadata("schedule", sched.join(","));
}
