use rand::RngCore;

use super::graph::Hypergraph3;
use crate::engine::{ExtensionOracle, MonotoneInstance};
use crate::subset::Subset;

/// Hitting sets of a hypergraph with sets of size at most 3.
pub struct Hs3System<'h> {
    hypergraph: &'h Hypergraph3,
    label: String,
}

pub fn hs3_system(h: &Hypergraph3) -> Hs3System<'_> {
    Hs3System {
        hypergraph: h,
        label: format!("hs3(n={}, m={})", h.n(), h.sets().len()),
    }
}

impl Hs3System<'_> {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

impl MonotoneInstance for Hs3System<'_> {
    fn universe_size(&self) -> usize {
        self.hypergraph.n()
    }

    fn contains(&self, s: &Subset) -> bool {
        self.hypergraph
            .sets()
            .iter()
            .all(|set| set.iter().any(|&e| s.contains(e)))
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Exact extension by branching on the elements of the first unhit set:
/// `α = 1`, `c = 3`.
pub struct Hs3ExactOracle<'h> {
    hypergraph: &'h Hypergraph3,
}

impl<'h> Hs3ExactOracle<'h> {
    pub fn new(h: &'h Hypergraph3) -> Self {
        Self { hypergraph: h }
    }

    fn branch(&self, taken: &mut [bool], chosen: &mut Vec<usize>, budget: usize) -> bool {
        let Some(set) = self.hypergraph.sets().iter().find(|set| set.iter().all(|&e| !taken[e])) else {
            return true;
        };
        if budget == 0 {
            return false;
        }
        for &e in set {
            taken[e] = true;
            chosen.push(e);
            if self.branch(taken, chosen, budget - 1) {
                return true;
            }
            chosen.pop();
            taken[e] = false;
        }
        false
    }
}

/// A hitting set of the sets missed by `X` with at most `k` elements, or `None`.
pub fn hs3_extend_exact(h: &Hypergraph3, x: &Subset, k: usize) -> Option<Subset> {
    let n = h.n();
    let mut taken: Vec<bool> = (0..n).map(|e| x.contains(e)).collect();
    let mut chosen = Vec::new();
    Hs3ExactOracle::new(h)
        .branch(&mut taken, &mut chosen, k)
        .then(|| Subset::from_elements(n, chosen))
}

impl ExtensionOracle for Hs3ExactOracle<'_> {
    fn alpha(&self) -> f64 {
        1.0
    }

    fn c(&self) -> f64 {
        3.0
    }

    fn extend(&self, x: &Subset, budget: usize, _rng: &mut dyn RngCore) -> Option<Subset> {
        hs3_extend_exact(self.hypergraph, x, budget)
    }
}
