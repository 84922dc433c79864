//! Declarative experiment harness.
//!
//! A single JSON config describes the model, initial states, methods, and
//! outputs; every default is materialized into the emitted metadata so no
//! run is under-specified. Runs are deterministic: identical config and
//! seed produce byte-identical CSV.

mod report;
mod run;

pub use report::{emit_report, RunSummary, SlopeFit, SlopeReport};
pub use run::{run_convergence, run_saddle, RunArtifacts};

use serde::{Deserialize, Serialize};

use crate::engine::StepConfig;
use crate::error::{Error, Result};
use crate::models::{Boundary, HeisenbergParams, SaddleInitSpec};

/// Model block of a config.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub sites: usize,
    pub coupling: f64,
    pub field: f64,
    /// Defaults to the frozen convention (open) when omitted.
    #[serde(default = "default_boundary")]
    pub boundary: Boundary,
}

fn default_boundary() -> Boundary {
    Boundary::Open
}

impl ModelSpec {
    pub fn params(&self) -> HeisenbergParams {
        HeisenbergParams::new(self.sites, self.coupling, self.field, self.boundary)
    }
}

/// Initial-state block.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialStateSpec {
    Singlet,
    Saddle {
        k: usize,
        #[serde(default = "default_high_index")]
        high_index: usize,
        #[serde(default = "default_ground_weight")]
        ground_weight: f64,
    },
    File { path: String },
}

fn default_high_index() -> usize {
    SaddleInitSpec::DEFAULT_HIGH_INDEX
}

fn default_ground_weight() -> f64 {
    SaddleInitSpec::DEFAULT_GROUND_WEIGHT
}

impl InitialStateSpec {
    pub fn label(&self) -> String {
        match self {
            InitialStateSpec::Singlet => "singlet".into(),
            InitialStateSpec::Saddle { k, .. } => format!("saddle{k}"),
            InitialStateSpec::File { .. } => "file".into(),
        }
    }
}

/// Method block.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MethodSpec {
    Ite {
        #[serde(default = "default_tau_max")]
        tau_max: f64,
        #[serde(default = "default_points")]
        points: usize,
    },
    Dbqite {
        #[serde(default = "default_steps")]
        steps: usize,
        #[serde(default)]
        step: StepConfig,
        /// Synthesize circuits and record per-step gate metrics.
        #[serde(default = "default_true")]
        gate_metrics: bool,
        /// Trotter slices per Hamiltonian exponential in the metrics
        /// synthesis.
        #[serde(default = "default_trotter_steps")]
        trotter_steps: usize,
    },
}

fn default_tau_max() -> f64 {
    20.0
}

fn default_points() -> usize {
    400
}

fn default_steps() -> usize {
    5
}

fn default_true() -> bool {
    true
}

fn default_trotter_steps() -> usize {
    2
}

impl MethodSpec {
    pub fn label(&self) -> String {
        match self {
            MethodSpec::Ite { .. } => "ite".into(),
            MethodSpec::Dbqite { step, .. } => step.formula.label().into(),
        }
    }
}

/// Output locations.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
    pub name: String,
}

/// Optional report extras.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportSpec {
    /// Measure GC/HOPF/Trotter error-order slopes on this config's model and
    /// first initial state.
    pub error_order_slopes: bool,
}

/// A full experiment description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub initial_states: Vec<InitialStateSpec>,
    pub methods: Vec<MethodSpec>,
    #[serde(default = "default_tracked")]
    pub tracked_eigenindices: Vec<usize>,
    pub output: OutputSpec,
    /// Recorded in the metadata; no step of the pipeline draws randomness.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub report: ReportSpec,
}

fn default_tracked() -> Vec<usize> {
    vec![0, 1]
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.params().validate()?;
        if self.model.sites > crate::dense::MAX_DENSE_QUBITS {
            return Err(Error::DenseCapacity(self.model.sites));
        }
        if self.initial_states.is_empty() {
            return Err(Error::InvalidConfig("need at least one initial state".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("need at least one method".into()));
        }
        let dim = 1usize << self.model.sites;
        for &idx in &self.tracked_eigenindices {
            if idx >= dim {
                return Err(Error::EigenIndex { index: idx, dim });
            }
        }
        for st in &self.initial_states {
            match st {
                InitialStateSpec::File { path } => {
                    if !std::path::Path::new(path).exists() {
                        return Err(Error::InvalidConfig(format!(
                            "initial-state file {path:?} does not exist"
                        )));
                    }
                }
                InitialStateSpec::Saddle { k, high_index, ground_weight } => {
                    SaddleInitSpec { k: *k, high_index: *high_index, ground_weight: *ground_weight }
                        .validate()?;
                    if *high_index >= dim {
                        return Err(Error::EigenIndex { index: *high_index, dim });
                    }
                }
                InitialStateSpec::Singlet => {
                    if self.model.sites % 2 != 0 {
                        return Err(Error::SiteCount(
                            self.model.sites,
                            "singlet initial state needs an even site count",
                        ));
                    }
                }
            }
        }
        for m in &self.methods {
            match m {
                MethodSpec::Ite { tau_max, points } => {
                    if !(*tau_max > 0.0) || *points < 2 {
                        return Err(Error::InvalidConfig(format!(
                            "ite method needs tau_max > 0 and points >= 2, got {tau_max}, {points}"
                        )));
                    }
                }
                MethodSpec::Dbqite { step, trotter_steps, .. } => {
                    step.validate()?;
                    if *trotter_steps == 0 {
                        return Err(Error::InvalidConfig("trotter_steps must be at least 1".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Distinct file label per method (formula name, suffixed on collision).
    pub(crate) fn method_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = Vec::with_capacity(self.methods.len());
        for m in &self.methods {
            let base = m.label();
            let clashes = labels
                .iter()
                .filter(|l| **l == base || l.starts_with(&format!("{base}-")))
                .count();
            if clashes == 0 {
                labels.push(base);
            } else {
                labels.push(format!("{base}-{clashes}"));
            }
        }
        labels
    }
}
