//! Deterministic statevector execution of the circuit IR.
//!
//! Amplitudes live in one flat buffer updated in place with bit-mask
//! indexing; applying a gate is `O(2^width)`. Qubit `q` of a width-`w`
//! circuit owns bit `w - 1 - q` of the amplitude index (site 1 is the most
//! significant bit), so the `data_qubits` payload occupies the high bits and
//! the ancilla block the low bits.
//!
//! Global phase is never normalized away; callers compare results with
//! fidelity or phase-aligned distances.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Widest circuit [`run_circuit`] accepts.
pub const MAX_SIM_WIDTH: usize = 26;

/// Widest circuit [`circuit_unitary`] accepts.
pub const MAX_UNITARY_WIDTH: usize = 12;

/// Ancilla population above which the final projection is refused.
pub const ANCILLA_RESIDUAL_LIMIT: f64 = 1e-10;

/// Result of a circuit run.
#[derive(Clone, Debug)]
pub struct SimResult {
    /// Final state over the data qubits, ancillas projected out.
    pub final_state: StateVector,
    /// Population found outside the all-zero ancilla subspace.
    pub ancilla_residual: f64,
}

/// Run `c` on `input ⊗ |0...0⟩_ancilla`.
///
/// Errors if the ancillas do not return to `|0⟩` within
/// [`ANCILLA_RESIDUAL_LIMIT`] — entangled or dirty ancillas signal a
/// compiler bug, not a user mistake.
pub fn run_circuit(c: &Circuit, input: &StateVector) -> Result<SimResult> {
    if c.width() > MAX_SIM_WIDTH {
        return Err(Error::WidthExceeded { width: c.width(), max: MAX_SIM_WIDTH });
    }
    if input.n() != c.data_qubits() {
        return Err(Error::QubitCount { expected: c.data_qubits(), got: input.n() });
    }
    let anc = c.ancilla_qubits();
    let dim = 1usize << c.width();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (i, &a) in input.amplitudes().iter().enumerate() {
        amps[i << anc] = a;
    }

    for (count, gate) in c.gates().iter().enumerate() {
        apply_gate(&mut amps, c.width(), gate);
        if count % 64 == 63 {
            check_norm(&amps)?;
        }
    }
    check_norm(&amps)?;

    let anc_mask = (1usize << anc) - 1;
    let mut kept = vec![Complex64::new(0.0, 0.0); 1usize << c.data_qubits()];
    let mut kept_population = 0.0;
    for (i, &a) in amps.iter().enumerate() {
        if i & anc_mask == 0 {
            kept[i >> anc] = a;
            kept_population += a.norm_sqr();
        }
    }
    let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let ancilla_residual = (total - kept_population).max(0.0);
    if ancilla_residual >= ANCILLA_RESIDUAL_LIMIT {
        return Err(Error::DirtyAncilla(ancilla_residual));
    }
    // keep amplitudes bit-exact when they are already normalized (an empty
    // circuit must return its input unchanged)
    let final_state = StateVector::from_amplitudes(c.data_qubits(), kept.clone())
        .or_else(|_| StateVector::normalized(c.data_qubits(), kept))?;
    Ok(SimResult { final_state, ancilla_residual })
}

/// Brute-force unitary of a small circuit: column `j` is the run on basis
/// input `|j⟩` over the full width (ancillas included).
pub fn circuit_unitary(c: &Circuit) -> Result<DenseOperator> {
    if c.width() > MAX_UNITARY_WIDTH {
        return Err(Error::WidthExceeded { width: c.width(), max: MAX_UNITARY_WIDTH });
    }
    let dim = 1usize << c.width();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..dim {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[j] = Complex64::new(1.0, 0.0);
        for gate in c.gates() {
            apply_gate(&mut amps, c.width(), gate);
        }
        for (i, &a) in amps.iter().enumerate() {
            m[(i, j)] = a;
        }
    }
    Ok(DenseOperator::from_matrix(m))
}

/// Unitary restricted to the data qubits: each data basis state is run with
/// clean ancillas, which must return clean. Meaningful only for circuits
/// whose ancillas uncompute on every input.
pub fn data_unitary(c: &Circuit) -> Result<DenseOperator> {
    if c.data_qubits() > MAX_UNITARY_WIDTH {
        return Err(Error::WidthExceeded { width: c.data_qubits(), max: MAX_UNITARY_WIDTH });
    }
    let dim = 1usize << c.data_qubits();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..dim {
        let res = run_circuit(c, &StateVector::basis(c.data_qubits(), j)?)?;
        // undo the projection renormalization to keep true matrix entries
        let scale = (1.0 - res.ancilla_residual).sqrt();
        for (i, &a) in res.final_state.amplitudes().iter().enumerate() {
            m[(i, j)] = a * scale;
        }
    }
    Ok(DenseOperator::from_matrix(m))
}

fn check_norm(amps: &[Complex64]) -> Result<()> {
    let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > 1e-9 {
        return Err(Error::NormDrift(norm_sq.sqrt()));
    }
    Ok(())
}

/// 2×2 matrix of a single-qubit gate, row-major `[m00, m01, m10, m11]`.
pub fn single_qubit_matrix(gate: &Gate) -> Option<[Complex64; 4]> {
    use std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let m = match gate {
        Gate::H(_) => [
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(-FRAC_1_SQRT_2, 0.0),
        ],
        Gate::S(_) => [one, zero, zero, Complex64::new(0.0, 1.0)],
        Gate::Sdg(_) => [one, zero, zero, Complex64::new(0.0, -1.0)],
        Gate::T(_) => [one, zero, zero, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
        Gate::Tdg(_) => [one, zero, zero, Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)],
        Gate::X(_) => [zero, one, one, zero],
        Gate::Rz(_, a) => [
            Complex64::from_polar(1.0, -a / 2.0),
            zero,
            zero,
            Complex64::from_polar(1.0, a / 2.0),
        ],
        Gate::Phase(_, a) => [one, zero, zero, Complex64::from_polar(1.0, *a)],
        Gate::U3(_, theta, phi, lambda) => {
            let (ht_cos, ht_sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            [
                Complex64::new(ht_cos, 0.0),
                -Complex64::from_polar(1.0, *lambda) * ht_sin,
                Complex64::from_polar(1.0, *phi) * ht_sin,
                Complex64::from_polar(1.0, phi + lambda) * ht_cos,
            ]
        }
        _ => return None,
    };
    Some(m)
}

fn apply_gate(amps: &mut [Complex64], width: usize, gate: &Gate) {
    if let Some(m) = single_qubit_matrix(gate) {
        let q = gate.qubits()[0];
        apply_single(amps, width, q, &m);
        return;
    }
    match gate {
        Gate::Cx(c, t) => {
            let cm = bit(width, *c);
            let tm = bit(width, *t);
            for i in 0..amps.len() {
                if i & cm != 0 && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        Gate::Ccx(c0, c1, t) => {
            let c0m = bit(width, *c0);
            let c1m = bit(width, *c1);
            let tm = bit(width, *t);
            for i in 0..amps.len() {
                if i & c0m != 0 && i & c1m != 0 && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        Gate::Unitary(u) => apply_unitary(amps, width, &u.qubits, &u.matrix),
        _ => unreachable!("single-qubit gates handled above"),
    }
}

fn bit(width: usize, q: usize) -> usize {
    1usize << (width - 1 - q)
}

fn apply_single(amps: &mut [Complex64], width: usize, q: usize, m: &[Complex64; 4]) {
    let mask = bit(width, q);
    let block = mask << 1;
    let mut base = 0;
    while base < amps.len() {
        for off in 0..mask {
            let i0 = base + off;
            let i1 = i0 | mask;
            let a0 = amps[i0];
            let a1 = amps[i1];
            amps[i0] = m[0] * a0 + m[1] * a1;
            amps[i1] = m[2] * a0 + m[3] * a1;
        }
        base += block;
    }
}

/// General k-qubit gate by gather/scatter; local index bit `k-1-j`
/// corresponds to `qubits[j]` (first listed qubit is most significant).
fn apply_unitary(amps: &mut [Complex64], width: usize, qubits: &[usize], m: &DMatrix<Complex64>) {
    let k = qubits.len();
    let local_dim = 1usize << k;
    debug_assert_eq!(m.nrows(), local_dim);
    let masks: Vec<usize> = qubits.iter().map(|&q| bit(width, q)).collect();
    let union: usize = masks.iter().sum();
    let spread = |local: usize| -> usize {
        let mut g = 0;
        for (j, &mask) in masks.iter().enumerate() {
            if local & (1 << (k - 1 - j)) != 0 {
                g |= mask;
            }
        }
        g
    };
    let offsets: Vec<usize> = (0..local_dim).map(spread).collect();
    let mut local = vec![Complex64::new(0.0, 0.0); local_dim];
    for base in 0..amps.len() {
        if base & union != 0 {
            continue;
        }
        for (li, &off) in offsets.iter().enumerate() {
            local[li] = amps[base | off];
        }
        for (li, &off) in offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (lj, &v) in local.iter().enumerate() {
                acc += m[(li, lj)] * v;
            }
            amps[base | off] = acc;
        }
    }
}
