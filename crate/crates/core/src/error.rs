//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Dense representations are capped to keep memory desk-scale.
    #[error("{0} qubits exceed the dense-operator cap of {max} (2^{max} amplitudes)", max = crate::dense::MAX_DENSE_QUBITS)]
    DenseCapacity(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("operation requires a Hermitian operator")]
    NotHermitian,

    #[error("expected {expected} qubits, got {got}")]
    QubitCount { expected: usize, got: usize },

    #[error("coefficient must be a finite real number, got {0}")]
    NonFiniteCoefficient(f64),

    #[error("site count {0} is invalid: {1}")]
    SiteCount(usize, &'static str),

    #[error("eigenstate index {index} out of range for dimension {dim}")]
    EigenIndex { index: usize, dim: usize },

    #[error("state norm {0} deviates from 1 by more than the allowed tolerance")]
    NormDeviation(f64),

    #[error("state vector vanished: imaginary-time evolution annihilated all amplitude weight")]
    Underflow,

    #[error("step size must be non-negative, got {0}")]
    NegativeStep(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("Pauli term of weight {0} is unsupported here (two-local Hamiltonians only)")]
    UnsupportedTermWeight(usize),

    #[error("unsupported product-formula order {0} (only order 2 is implemented)")]
    UnsupportedTrotterOrder(usize),

    #[error("schedule has {got} entries but recursion depth {need} is requested")]
    ScheduleLength { need: usize, got: usize },

    #[error("ancilla qubits did not return to |0⟩ (residual population {0:.3e}); this signals a compiler bug")]
    DirtyAncilla(f64),

    #[error("circuit width {width} exceeds the limit of {max} qubits")]
    WidthExceeded { width: usize, max: usize },

    #[error("invalid gate operands: {0}")]
    GateOperands(String),

    #[error("statevector norm drifted to {0} during simulation (non-unitary gate?)")]
    NormDrift(f64),

    #[error("circuit contains an opaque dense-unitary gate and cannot be serialized to text")]
    OpaqueGate,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
