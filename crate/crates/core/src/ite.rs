//! Exact imaginary-time evolution and double-bracket-flow reference
//! quantities.
//!
//! ITE is the normalized map `|Ψ(τ)⟩ = e^{-τH}|Ψ₀⟩ / ‖e^{-τH}|Ψ₀⟩‖`. On
//! projectors `Ψ = |Ψ⟩⟨Ψ|` it satisfies the double-bracket equation
//! `∂Ψ/∂τ = [[Ψ, H], Ψ]`, which is the Riemannian gradient flow of the loss
//! `𝓛_B(P) = -½‖P - B‖²_HS` restricted to the adjoint orbit. Along the flow
//! the energy obeys the fluctuation-refrigeration relation `∂_τE = -2V`.
//!
//! Everything here is dense and exact; it serves as ground truth for the
//! gate-level DB-QITE pipeline.

use num_complex::Complex64;

use crate::dense::{commutator, eigh, hs_norm, to_dense, DenseOperator, EigenSystem};
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::state::{fidelity, StateVector};

/// Negative round-off window clamped to zero by [`variance`].
const VARIANCE_CLAMP: f64 = -1e-10;

/// Energy expectation `⟨ψ|H|ψ⟩`, evaluated by streaming the Pauli terms over
/// the amplitudes (no dense matrix is formed).
pub fn energy(psi: &StateVector, h: &PauliSum) -> f64 {
    let hpsi = h.apply_to(psi.amplitudes());
    let e: Complex64 = psi
        .amplitudes()
        .iter()
        .zip(hpsi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    debug_assert!(e.im.abs() < 1e-10 * (1.0 + e.re.abs()), "imaginary residue {}", e.im);
    e.re
}

/// Energy fluctuation `V = ⟨H²⟩ - ⟨H⟩²`, clamped so that eigenstate
/// round-off (down to -1e-10) reads as exactly zero.
pub fn variance(psi: &StateVector, h: &PauliSum) -> f64 {
    let hpsi = h.apply_to(psi.amplitudes());
    let e: Complex64 = psi
        .amplitudes()
        .iter()
        .zip(hpsi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let h2: f64 = hpsi.iter().map(|a| a.norm_sqr()).sum();
    let v = h2 - e.re * e.re;
    if v < 0.0 && v >= VARIANCE_CLAMP {
        0.0
    } else {
        v
    }
}

/// Exact imaginary-time evolution with a cached eigensystem.
///
/// Amplitudes are damped in the eigenbasis with the spectrum shifted by its
/// minimum, `e^{-τ(λ_i - λ_min)}`, so durations in the hundreds stay finite;
/// normalization then restores the defining map.
#[derive(Clone, Debug)]
pub struct IteSolver {
    hamiltonian: PauliSum,
    eigen: EigenSystem,
}

impl IteSolver {
    pub fn new(h: &PauliSum) -> Result<Self> {
        let eigen = eigh(&to_dense(h)?)?;
        Ok(Self { hamiltonian: h.clone(), eigen })
    }

    /// Reuse an eigensystem computed elsewhere.
    pub fn with_eigen(h: &PauliSum, eigen: EigenSystem) -> Result<Self> {
        if eigen.dim() != 1usize << h.n() {
            return Err(Error::DimMismatch(eigen.dim(), 1usize << h.n()));
        }
        Ok(Self { hamiltonian: h.clone(), eigen })
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    /// `|Ψ(τ)⟩` for the given start state.
    pub fn evolve(&self, psi0: &StateVector, tau: f64) -> Result<StateVector> {
        if tau < 0.0 {
            return Err(Error::NegativeStep(tau));
        }
        if psi0.dim() != self.eigen.dim() {
            return Err(Error::DimMismatch(psi0.dim(), self.eigen.dim()));
        }
        if tau == 0.0 {
            return Ok(psi0.clone());
        }
        let lam_min = self.eigen.values()[0];
        let mut coeffs = self.eigen.to_eigenbasis(psi0.amplitudes());
        for (c, &lam) in coeffs.iter_mut().zip(self.eigen.values().iter()) {
            *c *= (-tau * (lam - lam_min)).exp();
        }
        let amps = self.eigen.from_eigenbasis(&coeffs);
        StateVector::normalized(psi0.n(), amps)
    }

    /// Sweep a τ grid, recording energies, variances, and fidelities to the
    /// tracked eigenstates.
    pub fn trajectory(
        &self,
        psi0: &StateVector,
        taus: &[f64],
        tracked: &[usize],
    ) -> Result<IteTrajectory> {
        let tracked_states = tracked
            .iter()
            .map(|&k| self.eigen.state(k))
            .collect::<Result<Vec<_>>>()?;
        let mut traj = IteTrajectory {
            taus: taus.to_vec(),
            states: Vec::with_capacity(taus.len()),
            energies: Vec::with_capacity(taus.len()),
            variances: Vec::with_capacity(taus.len()),
            tracked: tracked.to_vec(),
            fidelities: Vec::with_capacity(taus.len()),
        };
        for &tau in taus {
            let psi = self.evolve(psi0, tau)?;
            traj.energies.push(energy(&psi, &self.hamiltonian));
            traj.variances.push(variance(&psi, &self.hamiltonian));
            let fids = tracked_states
                .iter()
                .map(|s| fidelity(s, &psi))
                .collect::<Result<Vec<_>>>()?;
            traj.fidelities.push(fids);
            traj.states.push(psi);
        }
        Ok(traj)
    }
}

/// One-shot imaginary-time evolution (diagonalizes `h` on every call; use
/// [`IteSolver`] for sweeps).
pub fn ite_evolve(psi0: &StateVector, h: &PauliSum, tau: f64) -> Result<StateVector> {
    IteSolver::new(h)?.evolve(psi0, tau)
}

/// Per-τ record of an exact ITE sweep.
#[derive(Clone, Debug)]
pub struct IteTrajectory {
    pub taus: Vec<f64>,
    pub states: Vec<StateVector>,
    pub energies: Vec<f64>,
    pub variances: Vec<f64>,
    /// Tracked eigenstate indices.
    pub tracked: Vec<usize>,
    /// `fidelities[t][j]` is the overlap with eigenstate `tracked[j]` at
    /// `taus[t]`.
    pub fidelities: Vec<Vec<f64>>,
}

/// Riemannian gradient `-[[P, B], P]` of the Hilbert–Schmidt loss at `P`.
///
/// Hermitian and traceless for Hermitian inputs; assembled from the two
/// nested commutators verbatim.
pub fn riemannian_gradient(p: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    if !p.is_hermitian() || !b.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    Ok(commutator(&commutator(p, b)?, p)?.scale(-1.0))
}

/// Loss `𝓛_B(P) = -½‖P - B‖²_HS`.
///
/// For a pure-state projector `P = |ψ⟩⟨ψ|` this equals
/// `⟨ψ|B|ψ⟩ - ½(1 + ‖B‖²_HS)`: only the energy varies along the flow.
pub fn loss(p: &DenseOperator, b: &DenseOperator) -> Result<f64> {
    let d = hs_norm(&p.sub(b)?);
    Ok(-0.5 * d * d)
}

/// Hilbert–Schmidt residual of the double-bracket equation at time `tau`,
/// `‖dΨ/dτ - [[Ψ, H], Ψ]‖_HS`, with the derivative taken by a central
/// difference of the evolved projector. Vanishes as `O(dt²)`.
pub fn dbf_residual(solver: &IteSolver, psi0: &StateVector, tau: f64, dt: f64) -> Result<f64> {
    if dt <= 0.0 || tau - dt < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "need 0 < dt <= tau for the central difference, got tau={tau}, dt={dt}"
        )));
    }
    let h = to_dense(solver.hamiltonian())?;
    let p = DenseOperator::projector(&solver.evolve(psi0, tau)?);
    let plus = DenseOperator::projector(&solver.evolve(psi0, tau + dt)?);
    let minus = DenseOperator::projector(&solver.evolve(psi0, tau - dt)?);
    let derivative = plus.sub(&minus)?.scale(1.0 / (2.0 * dt));
    let bracket = commutator(&commutator(&p, &h)?, &p)?;
    hs_distance_raw(&derivative, &bracket)
}

fn hs_distance_raw(a: &DenseOperator, b: &DenseOperator) -> Result<f64> {
    Ok(hs_norm(&a.sub(b)?))
}

/// Check the loss-rate identity `∂_τ𝓛 = -‖[A, B]‖²_HS` at a flow point `A`.
///
/// Returns `(lhs, rhs)`: `lhs` is a central-difference derivative of the
/// loss along the first-order unitary integrator `A(±dt) = e^{±dt[A,B]} A
/// e^{∓dt[A,B]}` (which shares the exact instantaneous derivative with the
/// flow), `rhs` is the negated squared commutator norm. They agree to
/// `O(dt²)`.
pub fn loss_rate_check(
    a: &DenseOperator,
    b: &DenseOperator,
    dt: f64,
) -> Result<(f64, f64)> {
    if !a.is_hermitian() || !b.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    if dt <= 0.0 {
        return Err(Error::InvalidConfig(format!("dt must be positive, got {dt}")));
    }
    let k = commutator(a, b)?;
    let rhs = -hs_norm(&k) * hs_norm(&k);
    // e^{dt·K} for anti-Hermitian K equals e^{-i·dt·(iK)} with iK Hermitian.
    let ik = DenseOperator::hermitian_from(k.matrix().map(|z| z * Complex64::new(0.0, 1.0)))?;
    let es = eigh(&ik)?;
    let step = |t: f64| -> Result<DenseOperator> {
        let w = es.exp_unitary(-t);
        w.mul(a)?.mul(&w.adjoint())
    };
    let lhs = (loss(&step(dt)?, b)? - loss(&step(-dt)?, b)?) / (2.0 * dt);
    Ok((lhs, rhs))
}
