//! Double-bracket quantum imaginary-time evolution (DB-QITE).
//!
//! Imaginary-time evolution `|Ψ(τ)⟩ ∝ e^{-τH}|Ψ₀⟩` drives any state with
//! nonzero ground overlap toward the ground state of `H`. Viewed on density
//! matrices it is a double-bracket flow, `∂Ψ/∂τ = [[Ψ, H], Ψ]`, i.e. a
//! Riemannian steepest-descent flow for the energy. DB-QITE approximates one
//! gradient step per recursion level with unitary product formulas, so the
//! whole procedure compiles to quantum gates.
//!
//! The crate is organized bottom-up:
//!
//! - [`pauli`] — Pauli strings and real-weighted Pauli-sum Hamiltonians.
//! - [`dense`] — dense Hermitian linear algebra: eigendecompositions, unitary
//!   exponentials, commutators, Hilbert–Schmidt norms.
//! - [`state`] — normalized statevectors, fidelities, and the on-disk format.
//! - [`models`] — transverse-field Heisenberg chains, singlet product states,
//!   saddle-biased eigenstate superpositions, external warm starts.
//! - [`ite`] — exact imaginary-time evolution and double-bracket-flow
//!   reference quantities (loss, Riemannian gradient, cooling-rate checks).
//! - [`engine`] — state-level DB-QITE: group-commutator and higher-order
//!   product-formula steps, per-step grid-search scheduling.
//! - [`circuit`] — gate-level synthesis: Trotterized Hamiltonian evolution,
//!   ancilla-based reflection gadgets, the recursive DB-QITE circuit, and
//!   gate/depth metrics.
//! - [`sim`] — deterministic statevector execution of the circuit IR.
//! - [`experiment`] — declarative experiment harness emitting plot-ready
//!   CSV/JSON trajectories.

pub mod circuit;
pub mod dense;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod ite;
pub mod models;
pub mod pauli;
pub mod sim;
pub mod state;

pub use error::{Error, Result};
