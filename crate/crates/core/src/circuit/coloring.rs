//! Greedy graph-coloring of Hamiltonian terms into disjoint-support layers.
//!
//! Terms in one layer act on pairwise disjoint qubits, so their rotation
//! blocks can execute in parallel. Vertices are terms, edges connect terms
//! with overlapping support, and a largest-degree-first greedy assignment
//! with index tie-breaking keeps the result deterministic for a fixed input
//! order.

use crate::pauli::PauliSum;

/// Layer assignment of the terms of a Pauli sum.
#[derive(Clone, Debug)]
pub struct Layering {
    /// `layer_of[t]` is the layer index of term `t`.
    pub layer_of: Vec<usize>,
    /// Term indices per layer, ascending inside each layer.
    pub layers: Vec<Vec<usize>>,
}

impl Layering {
    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }
}

/// Color the conflict graph of `h`'s terms.
pub fn color_layers(h: &PauliSum) -> Layering {
    let terms = h.terms();
    let m = terms.len();
    let mut conflicts: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            if terms[i].overlaps(&terms[j]) {
                conflicts[i].push(j);
                conflicts[j].push(i);
            }
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| conflicts[b].len().cmp(&conflicts[a].len()).then(a.cmp(&b)));

    let mut layer_of = vec![usize::MAX; m];
    let mut num_layers = 0;
    for &t in &order {
        let mut used: Vec<bool> = vec![false; num_layers];
        for &nb in &conflicts[t] {
            if layer_of[nb] != usize::MAX {
                used[layer_of[nb]] = true;
            }
        }
        let color = used.iter().position(|&u| !u).unwrap_or(num_layers);
        if color == num_layers {
            num_layers += 1;
        }
        layer_of[t] = color;
    }

    let mut layers = vec![Vec::new(); num_layers];
    for (t, &c) in layer_of.iter().enumerate() {
        layers[c].push(t);
    }
    Layering { layer_of, layers }
}
