//! Reflection gadget: `e^{iθ|0...0⟩⟨0...0|}` on `n` data qubits.
//!
//! The all-zero control status is computed into a fresh ancilla through a
//! balanced tree of logical-AND gadgets, one PHASE gate fires on the tree
//! root, and the tree is uncomputed. Each AND is a relative-phase Toffoli
//! (Margolus gate) costing 3 CX; intermediate phases cancel between compute
//! and uncompute. Entangling cost: exactly `6n - 6` CX without mid-circuit
//! measurement. The measurement-assisted variant that uncomputes with an
//! X-basis measurement and a classically controlled Z averages `3.5n - 4`
//! entangling gates; it is reported by [`mid_circuit_avg_entangling_count`]
//! but not compiled (the simulator is measurement-free).

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Entangling-gate count of the measurement-free gadget.
pub fn measurement_free_entangling_count(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        6 * n - 6
    }
}

/// Average entangling-gate count of the measurement-assisted variant
/// (meaningful for `n >= 2`; reported only, never compiled here).
pub fn mid_circuit_avg_entangling_count(n: usize) -> f64 {
    3.5 * n as f64 - 4.0
}

/// Compile `e^{iθ|0...0⟩⟨0...0|}` over `n` data qubits plus `n - 1` ancillas.
pub fn compile_reflection(n: usize, theta: f64) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::SiteCount(0, "reflection needs at least one qubit"));
    }
    if n == 1 {
        // diag(e^{iθ}, 1) = X · PHASE(θ) · X exactly
        let mut c = Circuit::data_only(1)?;
        c.set_metadata("kind", "reflection");
        c.set_metadata("theta", theta.to_string());
        c.push(Gate::X(0))?;
        c.push(Gate::Phase(0, theta))?;
        c.push(Gate::X(0))?;
        return Ok(c);
    }

    let width = 2 * n - 1;
    let mut c = Circuit::new(width, n)?;
    c.set_metadata("kind", "reflection");
    c.set_metadata("theta", theta.to_string());

    for q in 0..n {
        c.push(Gate::X(q))?;
    }

    // balanced AND tree over the (inverted) data qubits
    let mut ands: Vec<(usize, usize, usize)> = Vec::with_capacity(n - 1);
    let mut level: Vec<usize> = (0..n).collect();
    let mut next_ancilla = n;
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len() / 2 + 1);
        let mut it = level.chunks_exact(2);
        for pair in &mut it {
            let t = next_ancilla;
            next_ancilla += 1;
            ands.push((pair[0], pair[1], t));
            next.push(t);
        }
        next.extend(it.remainder().iter().copied());
        level = next;
    }
    let root = level[0];

    for &(a, b, t) in &ands {
        append_and(&mut c, a, b, t)?;
    }
    c.push(Gate::Phase(root, theta))?;
    for &(a, b, t) in ands.iter().rev() {
        append_and(&mut c, a, b, t)?; // the Margolus gate is an involution
    }

    for q in 0..n {
        c.push(Gate::X(q))?;
    }
    Ok(c)
}

/// Relative-phase Toffoli (Margolus gate): maps `|a, b, t⟩` with `t = 0` to
/// `±|a, b, a∧b⟩`; the sign cancels under compute/uncompute conjugation.
fn append_and(c: &mut Circuit, a: usize, b: usize, t: usize) -> Result<()> {
    c.push(Gate::H(t))?;
    c.push(Gate::T(t))?;
    c.push(Gate::Cx(b, t))?;
    c.push(Gate::Tdg(t))?;
    c.push(Gate::Cx(a, t))?;
    c.push(Gate::T(t))?;
    c.push(Gate::Cx(b, t))?;
    c.push(Gate::Tdg(t))?;
    c.push(Gate::H(t))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::metrics;
    use crate::sim::{data_unitary, run_circuit};
    use crate::state::StateVector;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn count_law_holds_structurally() {
        for n in 1..=32 {
            let c = compile_reflection(n, 0.3).unwrap();
            let m = metrics(&c);
            assert_eq!(m.cx_count, measurement_free_entangling_count(n) as u64, "n={n}");
            let phases = c
                .gates()
                .iter()
                .filter(|g| matches!(g, Gate::Phase(_, _)))
                .count();
            assert_eq!(phases, 1, "n={n}: exactly one PHASE gate");
        }
    }

    #[test]
    fn single_qubit_reflection_matrix() {
        let c = compile_reflection(1, 0.9).unwrap();
        let u = data_unitary(&c).unwrap();
        let phase = Complex64::from_polar(1.0, 0.9);
        assert_abs_diff_eq!((u.entry(0, 0) - phase).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((u.entry(1, 1) - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u.entry(0, 1).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn three_qubit_reflection_equals_the_diagonal_target() {
        let theta = 0.7;
        let c = compile_reflection(3, theta).unwrap();
        let u = data_unitary(&c).unwrap();
        // phase-align on the (1,1) entry, which should be exactly 1
        let align = u.entry(1, 1);
        assert!((align.norm() - 1.0).abs() < 1e-10);
        for r in 0..8 {
            for col in 0..8 {
                let expect = if r != col {
                    Complex64::new(0.0, 0.0)
                } else if r == 0 {
                    Complex64::from_polar(1.0, theta)
                } else {
                    Complex64::new(1.0, 0.0)
                };
                let got = u.entry(r, col) / align;
                assert!(
                    (got - expect).norm() < 1e-10,
                    "entry ({r},{col}): {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn ancillas_return_to_zero_on_random_inputs() {
        let mut seed = 0xfeed5eedu64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for n in 2..=8 {
            let c = compile_reflection(n, 1.1).unwrap();
            let amps: Vec<Complex64> = (0..1usize << n).map(|_| Complex64::new(next(), next())).collect();
            let psi = StateVector::normalized(n, amps).unwrap();
            let res = run_circuit(&c, &psi).unwrap();
            assert!(res.ancilla_residual < 1e-12, "n={n}: residual {}", res.ancilla_residual);
        }
    }

    #[test]
    fn reported_formulas() {
        assert_eq!(measurement_free_entangling_count(1), 0);
        assert_eq!(measurement_free_entangling_count(10), 54);
        assert_abs_diff_eq!(mid_circuit_avg_entangling_count(10), 31.0, epsilon = 1e-12);
    }
}
