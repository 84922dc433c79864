//! Warm-start state-preparation circuits.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Prepare the singlet product state `2^{-L/4}(|10⟩ - |01⟩)^{⊗L/2}` from
/// `|0...0⟩`, exactly (including the global phase). Four gates per pair.
pub fn singlet_prep_circuit(sites: usize) -> Result<Circuit> {
    if sites == 0 || sites % 2 != 0 {
        return Err(Error::SiteCount(sites, "singlet pairing needs a positive even site count"));
    }
    let mut c = Circuit::data_only(sites)?;
    c.set_metadata("kind", "singlet-prep");
    for pair in 0..sites / 2 {
        let a = 2 * pair;
        let b = a + 1;
        // |00⟩ → |01⟩ → (|00⟩-|01⟩)/√2 → (|00⟩-|11⟩)/√2 → (|10⟩-|01⟩)/√2
        c.push(Gate::X(b))?;
        c.push(Gate::H(b))?;
        c.push(Gate::Cx(b, a))?;
        c.push(Gate::X(a))?;
    }
    Ok(c)
}
