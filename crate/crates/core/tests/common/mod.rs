//! Test-side oracles, independent of the library's computation paths.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use dbqite::dense::DenseOperator;
use dbqite::pauli::{PauliString, PauliSum};
use dbqite::state::StateVector;

/// Generic matrix exponential `e^A` by scaling-and-squaring a high-order
/// Taylor series; no eigendecomposition involved.
pub fn taylor_expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = a.nrows();
    let norm = a.camax();
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as i32 } else { 0 };
    let scaled = a.map(|z| z / 2f64.powi(squarings));
    let mut sum = DMatrix::<Complex64>::identity(dim, dim);
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    for k in 1..=24 {
        term = (&term * &scaled).map(|z| z / k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `e^{iθM}` through the Taylor route.
pub fn taylor_exp_unitary(m: &DenseOperator, theta: f64) -> DenseOperator {
    let a = m.matrix().map(|z| z * Complex64::new(0.0, theta));
    DenseOperator::from_matrix(taylor_expm(&a))
}

/// Single-step flow target `e^{s[|ω⟩⟨ω|, H]} |ω⟩`, Taylor route.
pub fn bracket_target(omega: &StateVector, h: &PauliSum, s: f64) -> StateVector {
    let hd = dbqite::dense::to_dense(h).unwrap();
    let proj = DenseOperator::projector(omega);
    let k = proj.matrix() * hd.matrix() - hd.matrix() * proj.matrix();
    let u = taylor_expm(&k.map(|z| z * s));
    let amps: Vec<Complex64> = (&u * nalgebra::DVector::from_column_slice(omega.amplitudes()))
        .iter()
        .copied()
        .collect();
    StateVector::normalized(omega.n(), amps).unwrap()
}

/// Phase-aligned distance `min_φ ‖e^{iφ}a - b‖`, formed as an explicit
/// vector difference so distances far below the fidelity resolution
/// (~1e-8) remain measurable.
pub fn phase_aligned_distance(a: &StateVector, b: &StateVector) -> f64 {
    let z = a.inner(b).unwrap();
    let phase = if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) };
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x * phase - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Ground energy by shifted power iteration on `σ1 - H`, using only the
/// Pauli-sum streaming apply (no dense matrix, no library eigensolver).
pub fn power_method_ground_energy(h: &PauliSum, iterations: usize, tol: f64) -> f64 {
    let dim = 1usize << h.n();
    let shift: f64 = h.terms().iter().map(|t| t.coefficient().abs()).sum::<f64>() + 1.0;
    // deterministic, structureless start vector
    let mut v: Vec<Complex64> = (0..dim)
        .map(|i| {
            let x = ((i as f64) * 0.7390851332151607 + 0.25).sin();
            let y = ((i as f64) * 0.5671432904097838 + 0.5).cos();
            Complex64::new(1.0 + 0.25 * x, 0.25 * y)
        })
        .collect();
    normalize(&mut v);
    let mut prev = f64::INFINITY;
    for _ in 0..iterations {
        // w = (σ1 - H) v
        let hv = h.apply_to(&v);
        let mut w: Vec<Complex64> = v
            .iter()
            .zip(hv.iter())
            .map(|(a, b)| shift * a - b)
            .collect();
        normalize(&mut w);
        let hw = h.apply_to(&w);
        let energy: f64 = w
            .iter()
            .zip(hw.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        v = w;
        if (energy - prev).abs() < tol {
            return energy;
        }
        prev = energy;
    }
    prev
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
}

/// Random Pauli-sum Hamiltonian (identity-free terms, coefficients in
/// [-1, 1]).
pub fn random_pauli_sum(n: usize, terms: usize, rng: &mut impl Rng) -> PauliSum {
    use dbqite::pauli::Pauli;
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut h = PauliSum::new(n);
    let mut added = 0;
    while added < terms {
        let ls: Vec<Pauli> = (0..n).map(|_| letters[rng.random_range(0..4)]).collect();
        if ls.iter().all(|&p| p == Pauli::I) {
            continue;
        }
        let coeff: f64 = rng.random_range(-1.0..1.0);
        h.add_term(PauliString::new(ls, coeff).unwrap()).unwrap();
        added += 1;
    }
    h
}

/// Random normalized state.
pub fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(n, amps).unwrap()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let lx: Vec<f64> = points.iter().map(|(x, _)| x.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|(_, y)| y.max(1e-300).ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Log-spaced grid, inclusive of both endpoints.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
        .collect()
}
