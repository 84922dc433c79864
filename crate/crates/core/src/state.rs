//! Normalized statevectors and the on-disk statevector format.
//!
//! File format: a header line `n=<int>` followed by `2^n` lines `<re> <im>`.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the unit-norm invariant of a [`StateVector`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Norm window accepted by [`StateVector::read_file`]; inputs further from
/// unit norm are rejected rather than silently renormalized.
pub const FILE_NORM_TOLERANCE: f64 = 1e-6;

/// A normalized pure state of `n` qubits: `2^n` complex amplitudes with
/// Euclidean norm 1 within [`NORM_TOLERANCE`]. Site 1 is the most significant
/// bit of the amplitude index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Build from amplitudes that are already normalized.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::DimMismatch(amps.len(), 1usize << n));
        }
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NormDeviation(norm));
        }
        Ok(Self { n, amps })
    }

    /// Build from arbitrary amplitudes, dividing out the norm.
    pub fn normalized(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::DimMismatch(amps.len(), 1usize << n));
        }
        let norm = l2_norm(&amps);
        if norm < 1e-150 {
            return Err(Error::Underflow);
        }
        let inv = 1.0 / norm;
        for a in &mut amps {
            *a *= inv;
        }
        Ok(Self { n, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::EigenIndex { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// The all-zeros reference state `|0...0⟩`.
    pub fn zero_state(n: usize) -> Self {
        Self::basis(n, 0).expect("index 0 always valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self ⊗ other`, with `self` on the most significant bits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { n: self.n + other.n, amps }
    }

    /// Multiply by a global phase `e^{iφ}`.
    pub fn with_global_phase(&self, phi: f64) -> StateVector {
        let phase = Complex64::from_polar(1.0, phi);
        StateVector {
            n: self.n,
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.dim() * 24);
        out.push_str(&format!("n={}\n", self.n));
        for a in &self.amps {
            out.push_str(&format!("{} {}\n", a.re, a.im));
        }
        out
    }

    /// Parse the statevector text format. Rejects inputs whose norm deviates
    /// from 1 by more than [`FILE_NORM_TOLERANCE`]; smaller deviations are
    /// renormalized away.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty statevector file".into()))?
            .trim();
        let n: usize = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("expected header n=<int>, got {header:?}")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad qubit count in header {header:?}")))?;
        let dim = 1usize << n;
        let mut amps = Vec::with_capacity(dim);
        for (lineno, raw) in lines.enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let re: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("line {}: bad real part", lineno + 2)))?;
            let im: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("line {}: bad imaginary part", lineno + 2)))?;
            if parts.next().is_some() {
                return Err(Error::Parse(format!("line {}: trailing tokens", lineno + 2)));
            }
            amps.push(Complex64::new(re, im));
        }
        if amps.len() != dim {
            return Err(Error::Parse(format!(
                "expected {dim} amplitudes for n={n}, found {}",
                amps.len()
            )));
        }
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > FILE_NORM_TOLERANCE {
            return Err(Error::NormDeviation(norm));
        }
        let inv = 1.0 / norm;
        for a in &mut amps {
            *a *= inv;
        }
        Ok(Self { n, amps })
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Overlap probability `|⟨a|b⟩|²`, invariant under global phases of either
/// argument.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    let ip = a.inner(b)?;
    Ok(ip.norm_sqr().min(1.0))
}

fn l2_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
