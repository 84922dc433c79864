//! Gate counts and depth.
//!
//! Counting basis: every single-qubit gate canonicalizes to one U3, CX
//! counts as one entangling gate, and a bare CCX decomposes per the chosen
//! accounting before counting. Depth is a greedy earliest-available-slot
//! schedule over the gate list as written (no peephole merging, no
//! commutation analysis). Opaque dense-unitary gates, which exist only for
//! exact-evolution simulation, contribute no U3/CX counts but occupy their
//! qubits for one depth slot.

use serde::Serialize;

use crate::circuit::{Circuit, Gate};

/// How a bare CCX gate is booked in the U3/CX basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CcxAccounting {
    /// Textbook Toffoli decomposition: 6 CX and 9 single-qubit gates.
    #[default]
    Standard,
    /// Relative-phase AND gadget: 3 CX and 6 single-qubit gates.
    AndGadget,
}

/// Structural circuit metrics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GateMetrics {
    pub u3_count: u64,
    pub cx_count: u64,
    /// Greedy earliest-slot depth over the IR gate list.
    pub depth: u64,
    /// State-preparation queries recorded by the synthesizer (3^k for GC,
    /// 5^k for HOPF at recursion depth k); 0 for circuits without that
    /// metadata.
    pub u0_queries: u64,
}

/// Metrics under the default CCX accounting.
pub fn metrics(c: &Circuit) -> GateMetrics {
    metrics_with(c, CcxAccounting::default())
}

pub fn metrics_with(c: &Circuit, ccx: CcxAccounting) -> GateMetrics {
    let (ccx_cx, ccx_u3) = match ccx {
        CcxAccounting::Standard => (6, 9),
        CcxAccounting::AndGadget => (3, 6),
    };
    let mut u3 = 0u64;
    let mut cx = 0u64;
    let mut avail: Vec<u64> = vec![0; c.width()];
    for g in c.gates() {
        match g {
            Gate::Cx(..) => cx += 1,
            Gate::Ccx(..) => {
                cx += ccx_cx;
                u3 += ccx_u3;
            }
            Gate::Unitary(_) => {}
            _ => u3 += 1, // every remaining kind is single-qubit
        }
        let qs = g.qubits();
        let slot = qs.iter().map(|&q| avail[q]).max().unwrap_or(0) + 1;
        for &q in &qs {
            avail[q] = slot;
        }
    }
    let depth = avail.into_iter().max().unwrap_or(0);
    let u0_queries = c
        .metadata_value("u0_queries")
        .and_then(|v| v.parse().ok())
        .unwrap_or(0);
    GateMetrics { u3_count: u3, cx_count: cx, depth, u0_queries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;

    #[test]
    fn empty_circuit_has_zero_metrics() {
        let c = Circuit::new(3, 3).unwrap();
        let m = metrics(&c);
        assert_eq!(m, GateMetrics { u3_count: 0, cx_count: 0, depth: 0, u0_queries: 0 });
    }

    #[test]
    fn depth_is_the_greedy_schedule() {
        let mut c = Circuit::new(3, 3).unwrap();
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::H(1)).unwrap(); // parallel with the first
        c.push(Gate::Cx(0, 1)).unwrap(); // slot 2
        c.push(Gate::H(2)).unwrap(); // slot 1
        c.push(Gate::Cx(1, 2)).unwrap(); // slot 3
        let m = metrics(&c);
        assert_eq!(m.depth, 3);
        assert_eq!(m.u3_count, 3);
        assert_eq!(m.cx_count, 2);
    }

    #[test]
    fn ccx_accounting_modes() {
        let mut c = Circuit::new(3, 3).unwrap();
        c.push(Gate::Ccx(0, 1, 2)).unwrap();
        let std = metrics_with(&c, CcxAccounting::Standard);
        assert_eq!((std.cx_count, std.u3_count), (6, 9));
        let gadget = metrics_with(&c, CcxAccounting::AndGadget);
        assert_eq!((gadget.cx_count, gadget.u3_count), (3, 6));
        assert_eq!(std.depth, 1);
    }

    #[test]
    fn u0_queries_come_from_metadata() {
        let mut c = Circuit::new(2, 2).unwrap();
        c.set_metadata("u0_queries", "27");
        assert_eq!(metrics(&c).u0_queries, 27);
    }
}
