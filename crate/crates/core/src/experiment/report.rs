//! Machine-readable run summaries and optional error-order slope fits.

use serde::Serialize;
use serde_json::{json, Value};

use num_complex::Complex64;

use crate::circuit::{compile_trotter, GateMetrics};
use crate::dense::{commutator, hs_distance, to_dense, DenseOperator};
use crate::engine::HamiltonianContext;
use crate::error::Result;
use crate::pauli::PauliSum;
use crate::sim::circuit_unitary;
use crate::state::StateVector;

/// Summary of one trajectory.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub label: String,
    pub initial_state: String,
    pub method: String,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub initial_variance: f64,
    pub final_variance: f64,
    pub tracked_eigenindices: Vec<usize>,
    pub initial_fidelities: Vec<f64>,
    pub final_fidelities: Vec<f64>,
    pub energy_monotone: bool,
    /// DB-QITE only: step sizes chosen by the grid search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<f64>>,
    /// DB-QITE only: energy gain `E_k - E_{k+1}` per step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_gains: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub improved: Option<Vec<bool>>,
    /// Per-recursion-depth gate metrics, when synthesized.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate_metrics: Option<Vec<GateMetrics>>,
    /// Geometric-mean ratio of successive state-prep query counts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query_ratio_fit: Option<f64>,
    /// Successive total-gate-count ratios (u3 + cx), one per depth step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_ratios: Option<Vec<f64>>,
    /// Last successive count ratio; approaches the query branching factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_count_ratio: Option<f64>,
}

impl RunSummary {
    /// Fill the ratio fits from recorded per-depth metrics.
    pub fn with_metric_fits(mut self) -> Self {
        if let Some(ms) = &self.gate_metrics {
            if ms.len() >= 2 {
                let queries: Vec<f64> = ms.iter().map(|m| m.u0_queries as f64).collect();
                let ratios: Vec<f64> = queries.windows(2).map(|w| w[1] / w[0]).collect();
                let log_mean = ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64;
                self.query_ratio_fit = Some(log_mean.exp());
                let totals: Vec<f64> =
                    ms.iter().map(|m| (m.u3_count + m.cx_count) as f64).collect();
                let count_ratios: Vec<f64> = totals
                    .windows(2)
                    .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { f64::NAN })
                    .collect();
                self.final_count_ratio = count_ratios.last().copied();
                self.count_ratios = Some(count_ratios);
            }
        }
        self
    }
}

/// A fitted log-log slope with its sample points.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    /// `(parameter, error)` samples the fit was taken over.
    pub points: Vec<(f64, f64)>,
}

/// Error-order slopes measured on one (Hamiltonian, state) pair.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeReport {
    /// Group-commutator step error vs step size (expect 3/2).
    pub gc: SlopeFit,
    /// Higher-order product-formula step error vs step size (expect 2).
    pub hopf: SlopeFit,
    /// Second-order Trotter error vs angle, single slice (expect 3).
    pub trotter: SlopeFit,
}

/// Assemble the summary document. An empty run list with no slope report
/// gives an empty object.
pub fn emit_report(runs: &[RunSummary], slopes: Option<&SlopeReport>) -> Value {
    if runs.is_empty() && slopes.is_none() {
        return json!({});
    }
    let mut doc = json!({ "runs": runs });
    if let Some(s) = slopes {
        doc["error_order_slopes"] = serde_json::to_value(s).expect("slope report serializes");
    }
    doc
}

/// Measure the three error-order slopes on the given model and start state.
pub fn measure_slopes(
    ctx: &HamiltonianContext,
    h: &PauliSum,
    psi: &StateVector,
) -> Result<SlopeReport> {
    let dense = to_dense(h)?;
    let proj = DenseOperator::projector(psi);
    let k = commutator(&proj, &dense)?;
    let ik = DenseOperator::hermitian_from(k.matrix().map(|z| z * Complex64::new(0.0, 1.0)))?;
    let flow = crate::dense::eigh(&ik)?;
    let target = |s: f64| -> Result<StateVector> {
        let u = flow.exp_unitary(-s);
        StateVector::normalized(psi.n(), u.apply(psi.amplitudes()))
    };

    let svals: Vec<f64> = log_grid(1e-4, 1e-2, 9);
    let mut gc_points = Vec::new();
    let mut hopf_points = Vec::new();
    for &s in &svals {
        let t = target(s)?;
        gc_points.push((s, phase_aligned_distance(&ctx.gc_step(psi, s, 1.0, 1.0)?, &t)?));
        hopf_points.push((s, phase_aligned_distance(&ctx.hopf_step(psi, s)?, &t)?));
    }

    let thetas: Vec<f64> = log_grid(0.02, 0.2, 7);
    let mut trotter_points = Vec::new();
    for &theta in &thetas {
        let c = compile_trotter(h, theta, 1, 2)?;
        let u = circuit_unitary(&c)?;
        let exact = ctx.eigen().exp_unitary(theta);
        trotter_points.push((theta, hs_distance(&u, &exact)?));
    }

    Ok(SlopeReport {
        gc: fit(gc_points),
        hopf: fit(hopf_points),
        trotter: fit(trotter_points),
    })
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
        .collect()
}

fn fit(points: Vec<(f64, f64)>) -> SlopeFit {
    let lx: Vec<f64> = points.iter().map(|(x, _)| x.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|(_, y)| y.max(1e-300).ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    SlopeFit { slope: cov / var, points }
}

/// `min_φ ‖e^{iφ}a - b‖`, formed as an explicit vector difference; the
/// fidelity-based expression `√(2 - 2|⟨a|b⟩|)` saturates near 1e-8 and
/// would flatten the higher-order slopes.
pub(crate) fn phase_aligned_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    let z = a.inner(b)?;
    let phase = if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) };
    Ok(a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x * phase - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_heisenberg, singlet_state, Boundary, HeisenbergParams};

    #[test]
    fn empty_report_is_an_empty_object() {
        assert_eq!(emit_report(&[], None), json!({}));
    }

    #[test]
    fn slopes_on_a_small_model_have_the_expected_orders() {
        let h = build_heisenberg(&HeisenbergParams::new(4, 1.0, 0.5, Boundary::Open)).unwrap();
        let ctx = HamiltonianContext::new(&h).unwrap();
        let psi = singlet_state(4).unwrap();
        let report = measure_slopes(&ctx, &h, &psi).unwrap();
        assert!((report.gc.slope - 1.5).abs() < 0.2, "gc slope {}", report.gc.slope);
        assert!((report.hopf.slope - 2.0).abs() < 0.2, "hopf slope {}", report.hopf.slope);
        assert!((report.trotter.slope - 3.0).abs() < 0.3, "trotter slope {}", report.trotter.slope);
    }
}
