//! Pauli strings and real-weighted Pauli-sum Hamiltonians.
//!
//! A Hamiltonian is stored as `H = Σ_t c_t · ⊗_q σ_{t,q}` with real
//! coefficients `c_t` and `σ ∈ {I, X, Y, Z}`. Qubit ordering convention:
//! site 1 is the most significant bit of the amplitude index, so the string
//! `"XZI"` acts with X on the most significant qubit.
//!
//! The on-disk text format is one term per line, `<coeff> <letters>`, e.g.
//! `0.5 XXIIIIIIII`.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Bit masks describing how a Pauli string acts on amplitude indices.
///
/// A string maps basis state `|c⟩` to `phase(c) · |c ⊕ flip⟩` where
/// `phase(c) = i^{y_count} · (−1)^{popcount(c & phase_mask)}`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TermAction {
    pub flip: usize,
    pub phase_mask: usize,
    pub y_count: u32,
}

impl TermAction {
    /// Coefficient-independent prefactor `i^{y_count}`.
    pub fn i_power(&self) -> Complex64 {
        match self.y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

/// A tensor product of Pauli letters with a real coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    letters: Vec<Pauli>,
    coefficient: f64,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>, coefficient: f64) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::NonFiniteCoefficient(coefficient));
        }
        Ok(Self { letters, coefficient })
    }

    /// Parse a string like `"XXI"` together with its coefficient.
    pub fn parse(letters: &str, coefficient: f64) -> Result<Self> {
        let ls = letters
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::Parse(format!("invalid Pauli letter {c:?} in {letters:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ls, coefficient)
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn with_coefficient(&self, coefficient: f64) -> Result<Self> {
        Self::new(self.letters.clone(), coefficient)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Sites (0-based) carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(q, _)| q)
            .collect()
    }

    /// True if the string shares a support qubit with `other`.
    pub fn overlaps(&self, other: &PauliString) -> bool {
        self.letters
            .iter()
            .zip(other.letters.iter())
            .any(|(&a, &b)| a != Pauli::I && b != Pauli::I)
    }

    pub(crate) fn action(&self) -> TermAction {
        let n = self.n();
        let mut flip = 0usize;
        let mut phase_mask = 0usize;
        let mut y_count = 0u32;
        for (q, &p) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    phase_mask |= bit;
                    y_count += 1;
                }
                Pauli::Z => phase_mask |= bit,
            }
        }
        TermAction { flip, phase_mask, y_count }
    }

    /// Accumulate `coefficient · P |ψ⟩` into `out`.
    pub fn apply_to(&self, amps: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(amps.len(), out.len());
        let act = self.action();
        let scale = act.i_power() * self.coefficient;
        for (c, &a) in amps.iter().enumerate() {
            let sign = if (c & act.phase_mask).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            out[c ^ act.flip] += scale * sign * a;
        }
    }
}

/// A Hamiltonian as a merged sum of Pauli strings over `n` qubits.
///
/// No two terms share a letter sequence; adding a duplicate merges the
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn new(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = PauliString>) -> Result<Self> {
        let mut sum = Self::new(n);
        for t in terms {
            sum.add_term(t)?;
        }
        Ok(sum)
    }

    /// Add a term, merging it into an existing term with the same letters.
    pub fn add_term(&mut self, term: PauliString) -> Result<()> {
        if term.n() != self.n {
            return Err(Error::QubitCount { expected: self.n, got: term.n() });
        }
        if let Some(existing) = self.terms.iter_mut().find(|t| t.letters == term.letters) {
            existing.coefficient += term.coefficient;
        } else {
            self.terms.push(term);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn max_weight(&self) -> usize {
        self.terms.iter().map(|t| t.weight()).max().unwrap_or(0)
    }

    /// Compute `H |ψ⟩`.
    pub fn apply_to(&self, amps: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(amps.len(), 1usize << self.n);
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for t in &self.terms {
            t.apply_to(amps, &mut out);
        }
        out
    }

    /// Parse the one-term-per-line text format. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut sum: Option<PauliSum> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let coeff_str = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: missing coefficient", lineno + 1)))?;
            let letters = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: missing Pauli letters", lineno + 1)))?;
            if parts.next().is_some() {
                return Err(Error::Parse(format!("line {}: trailing tokens", lineno + 1)));
            }
            let coeff: f64 = coeff_str
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad coefficient {coeff_str:?}", lineno + 1)))?;
            let term = PauliString::parse(letters, coeff)
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            match (n, &mut sum) {
                (None, _) => {
                    n = Some(term.n());
                    let mut s = PauliSum::new(term.n());
                    s.add_term(term)?;
                    sum = Some(s);
                }
                (Some(expect), Some(s)) => {
                    if term.n() != expect {
                        return Err(Error::Parse(format!(
                            "line {}: term has {} letters, expected {}",
                            lineno + 1,
                            term.n(),
                            expect
                        )));
                    }
                    s.add_term(term)?;
                }
                _ => unreachable!(),
            }
        }
        sum.ok_or_else(|| Error::Parse("no Pauli terms found".into()))
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_string())?;
        Ok(())
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            write!(f, "{} ", t.coefficient)?;
            for &p in t.letters() {
                write!(f, "{}", p.to_char())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_z_action_on_basis_states() {
        let z = PauliString::parse("Z", 1.0).unwrap();
        let mut out = vec![c(0.0); 2];
        z.apply_to(&[c(1.0), c(0.0)], &mut out);
        assert_eq!(out, vec![c(1.0), c(0.0)]);
        out = vec![c(0.0); 2];
        z.apply_to(&[c(0.0), c(1.0)], &mut out);
        assert_eq!(out, vec![c(0.0), c(-1.0)]);
    }

    #[test]
    fn y_action_carries_the_phase() {
        let y = PauliString::parse("Y", 1.0).unwrap();
        let mut out = vec![c(0.0); 2];
        y.apply_to(&[c(1.0), c(0.0)], &mut out);
        assert_eq!(out, vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)]);
    }

    #[test]
    fn site_one_is_the_most_significant_bit() {
        // "XI" flips the most significant bit: |00⟩ -> |10⟩ (index 0 -> 2).
        let xi = PauliString::parse("XI", 1.0).unwrap();
        let mut out = vec![c(0.0); 4];
        xi.apply_to(&[c(1.0), c(0.0), c(0.0), c(0.0)], &mut out);
        assert_eq!(out[2], c(1.0));
    }

    #[test]
    fn merging_duplicate_terms() {
        let mut h = PauliSum::new(2);
        h.add_term(PauliString::parse("XX", 1.0).unwrap()).unwrap();
        h.add_term(PauliString::parse("XX", 0.5).unwrap()).unwrap();
        h.add_term(PauliString::parse("ZI", 2.0).unwrap()).unwrap();
        assert_eq!(h.num_terms(), 2);
        assert_eq!(h.terms()[0].coefficient(), 1.5);
    }

    #[test]
    fn parse_round_trip() {
        let text = "0.5 XXII\n-1 IYZI\n# comment\n\n2.25 IIZZ\n";
        let h = PauliSum::parse(text).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(h.num_terms(), 3);
        let h2 = PauliSum::parse(&h.to_string()).unwrap();
        assert_eq!(h, h2);
    }

    #[test]
    fn parse_rejects_bad_letters_and_ragged_lengths() {
        assert!(matches!(PauliSum::parse("1.0 XQ"), Err(Error::Parse(_))));
        assert!(matches!(PauliSum::parse("1.0 XX\n1.0 XXX"), Err(Error::Parse(_))));
        assert!(matches!(PauliSum::parse("zzz XX"), Err(Error::Parse(_))));
        assert!(matches!(PauliSum::parse(""), Err(Error::Parse(_))));
    }

    #[test]
    fn rejects_non_finite_coefficients() {
        assert!(PauliString::parse("X", f64::NAN).is_err());
        assert!(PauliString::parse("X", f64::INFINITY).is_err());
    }

    #[test]
    fn term_length_mismatch_rejected() {
        let mut h = PauliSum::new(3);
        let err = h.add_term(PauliString::parse("XX", 1.0).unwrap());
        assert!(matches!(err, Err(Error::QubitCount { expected: 3, got: 2 })));
    }
}
