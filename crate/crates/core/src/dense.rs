//! Dense Hermitian linear algebra for the desk-scale oracles.
//!
//! Everything here works on explicit `2^n × 2^n` complex matrices, capped at
//! [`MAX_DENSE_QUBITS`] qubits. The matrix exponential goes through the
//! eigendecomposition rather than a Padé scheme: inputs are Hermitian and one
//! eigensystem is reused across many rotation angles per DB-QITE run.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::state::StateVector;

/// Dense representations are limited to this many qubits.
pub const MAX_DENSE_QUBITS: usize = 14;

/// Entrywise tolerance for the Hermitian flag.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Eigenvalue gap below which two eigenvalues count as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// A square complex matrix with a validated Hermitian flag.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<Complex64>,
    hermitian: bool,
}

impl DenseOperator {
    /// Wrap a matrix, measuring Hermiticity entrywise.
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "operator must be square");
        let hermitian = is_hermitian(&matrix);
        Self { matrix, hermitian }
    }

    /// Wrap a matrix that must be Hermitian.
    pub fn hermitian_from(matrix: DMatrix<Complex64>) -> Result<Self> {
        let op = Self::from_matrix(matrix);
        if !op.hermitian {
            return Err(Error::NotHermitian);
        }
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim), hermitian: true }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: DMatrix::zeros(dim, dim), hermitian: true }
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`.
    pub fn projector(state: &StateVector) -> Self {
        let dim = state.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, a) in state.amplitudes().iter().enumerate() {
            for (j, b) in state.amplitudes().iter().enumerate() {
                m[(i, j)] = a * b.conj();
            }
        }
        Self { matrix: m, hermitian: true }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator { matrix: self.matrix.adjoint(), hermitian: self.hermitian }
    }

    pub fn mul(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_dim(other)?;
        Ok(DenseOperator::from_matrix(&self.matrix * &other.matrix))
    }

    pub fn add(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_dim(other)?;
        Ok(DenseOperator {
            matrix: &self.matrix + &other.matrix,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_dim(other)?;
        Ok(DenseOperator {
            matrix: &self.matrix - &other.matrix,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn scale(&self, factor: f64) -> DenseOperator {
        DenseOperator {
            matrix: self.matrix.map(|z| z * factor),
            hermitian: self.hermitian,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Matrix-vector product `M ψ` on a raw amplitude slice.
    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let v = DVector::from_column_slice(amps);
        (&self.matrix * v).data.into()
    }

    /// Quadratic form `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64> {
        if state.dim() != self.dim() {
            return Err(Error::DimMismatch(state.dim(), self.dim()));
        }
        let mpsi = self.apply(state.amplitudes());
        Ok(state
            .amplitudes()
            .iter()
            .zip(mpsi.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise deviation from unitarity, `max |M†M − 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        (prod - id).camax()
    }

    fn check_dim(&self, other: &DenseOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

/// Materialize a Pauli sum as a dense matrix, `Σ c_t · ⊗_q σ_{t,q}`.
///
/// Each term is a generalized permutation, so the build touches `O(2^n)`
/// entries per term instead of forming Kronecker products.
pub fn to_dense(h: &PauliSum) -> Result<DenseOperator> {
    if h.n() > MAX_DENSE_QUBITS {
        return Err(Error::DenseCapacity(h.n()));
    }
    let dim = 1usize << h.n();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for t in h.terms() {
        let act = t.action();
        let scale = act.i_power() * t.coefficient();
        for col in 0..dim {
            let sign = if (col & act.phase_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(col ^ act.flip, col)] += scale * sign;
        }
    }
    // Real coefficients on Pauli strings always give a Hermitian matrix.
    Ok(DenseOperator { matrix: m, hermitian: true })
}

/// `AB − BA`. Anti-Hermitian whenever both inputs are Hermitian.
pub fn commutator(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(a.dim(), b.dim()));
    }
    let m = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    Ok(DenseOperator::from_matrix(m))
}

/// Hilbert–Schmidt (Frobenius) norm `√Tr(M†M)`.
pub fn hs_norm(m: &DenseOperator) -> f64 {
    m.matrix().norm()
}

/// Hilbert–Schmidt distance `‖A − B‖`.
pub fn hs_distance(a: &DenseOperator, b: &DenseOperator) -> Result<f64> {
    Ok(hs_norm(&a.sub(b)?))
}

/// Eigendecomposition of a Hermitian operator.
///
/// Eigenvalues ascend. Within a degenerate cluster (gap < [`DEGENERACY_GAP`])
/// eigenvectors are ordered by descending magnitude of their first nonzero
/// amplitude; every eigenvector is phase-fixed so that its first nonzero
/// amplitude is real positive. This makes eigenstate indices reproducible
/// across runs and platforms.
pub fn eigh(m: &DenseOperator) -> Result<EigenSystem> {
    if !m.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let se = m.matrix().clone().symmetric_eigen();
    let dim = m.dim();

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));

    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }

    for k in 0..dim {
        phase_fix_column(&mut vectors, k);
    }

    // Reorder vectors inside each degenerate cluster; the ascending values
    // stay put (they agree within the gap threshold anyway).
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && values[end] - values[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        if end - start > 1 {
            let mut cols: Vec<(usize, f64)> = (start..end)
                .map(|k| (k, first_nonzero_magnitude(&vectors, k)))
                .collect();
            cols.sort_by(|a, b| b.1.total_cmp(&a.1));
            let perm: Vec<usize> = cols.iter().map(|&(k, _)| k).collect();
            let cluster: Vec<DVector<Complex64>> =
                perm.iter().map(|&k| vectors.column(k).into_owned()).collect();
            for (offset, col) in cluster.into_iter().enumerate() {
                vectors.set_column(start + offset, &col);
            }
        }
        start = end;
    }

    Ok(EigenSystem { values, vectors })
}

/// Unitary exponential `e^{iθM}` of a Hermitian operator.
pub fn exp_unitary(m: &DenseOperator, theta: f64) -> Result<DenseOperator> {
    Ok(eigh(m)?.exp_unitary(theta))
}

fn phase_fix_column(vectors: &mut DMatrix<Complex64>, col: usize) {
    let (idx, _) = first_nonzero(vectors, col);
    let pivot = vectors[(idx, col)];
    let mag = pivot.norm();
    if mag > 0.0 {
        let phase = pivot.conj() / mag;
        for r in 0..vectors.nrows() {
            vectors[(r, col)] *= phase;
        }
    }
}

fn first_nonzero(vectors: &DMatrix<Complex64>, col: usize) -> (usize, f64) {
    for r in 0..vectors.nrows() {
        let mag = vectors[(r, col)].norm();
        if mag > 1e-10 {
            return (r, mag);
        }
    }
    (0, vectors[(0, col)].norm())
}

fn first_nonzero_magnitude(vectors: &DMatrix<Complex64>, col: usize) -> f64 {
    first_nonzero(vectors, col).1
}

fn is_hermitian(m: &DMatrix<Complex64>) -> bool {
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            if (m[(i, j)] - m[(j, i)].conj()).norm() >= HERMITIAN_TOLERANCE {
                return false;
            }
        }
    }
    true
}

/// Sorted eigenvalues and orthonormal eigenvectors of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Ascending eigenvalues.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvector matrix; column `k` belongs to `values()[k]`.
    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// Eigenvector `|λ_k⟩` as a statevector.
    pub fn state(&self, k: usize) -> Result<StateVector> {
        if k >= self.dim() {
            return Err(Error::EigenIndex { index: k, dim: self.dim() });
        }
        let n = self.dim().trailing_zeros() as usize;
        StateVector::normalized(n, self.vectors.column(k).iter().copied().collect())
    }

    /// Coefficients of `ψ` in the eigenbasis, `V† ψ`.
    pub fn to_eigenbasis(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let v = DVector::from_column_slice(amps);
        (self.vectors.adjoint() * v).data.into()
    }

    /// Amplitudes from eigenbasis coefficients, `V c`.
    pub fn from_eigenbasis(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let v = DVector::from_column_slice(coeffs);
        (&self.vectors * v).data.into()
    }

    /// Apply `e^{iθM}` to raw amplitudes via two basis changes.
    pub fn evolve_phase(&self, amps: &[Complex64], theta: f64) -> Vec<Complex64> {
        let mut coeffs = self.to_eigenbasis(amps);
        for (c, &lam) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= Complex64::from_polar(1.0, theta * lam);
        }
        self.from_eigenbasis(&coeffs)
    }

    /// Dense unitary `e^{iθM} = V e^{iθΛ} V†`.
    pub fn exp_unitary(&self, theta: f64) -> DenseOperator {
        let phases = DVector::from_iterator(
            self.dim(),
            self.values.iter().map(|&lam| Complex64::from_polar(1.0, theta * lam)),
        );
        let m = &self.vectors * DMatrix::from_diagonal(&phases) * self.vectors.adjoint();
        DenseOperator::from_matrix(m)
    }

    /// `V Λ V†`, for residual checks.
    pub fn reconstruct(&self) -> DenseOperator {
        let diag = DVector::from_iterator(
            self.dim(),
            self.values.iter().map(|&lam| Complex64::new(lam, 0.0)),
        );
        let m = &self.vectors * DMatrix::from_diagonal(&diag) * self.vectors.adjoint();
        DenseOperator::from_matrix(m)
    }
}
