use rand::RngCore;

use super::graph::Graph;
use crate::engine::{ExtensionOracle, MonotoneInstance};
use crate::subset::Subset;

/// Vertex covers of a graph.
pub struct VcSystem<'g> {
    graph: &'g Graph,
    label: String,
}

pub fn vc_system(g: &Graph) -> VcSystem<'_> {
    VcSystem {
        graph: g,
        label: format!("vc(n={}, m={})", g.n(), g.edges().len()),
    }
}

impl<'g> VcSystem<'g> {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }
}

impl MonotoneInstance for VcSystem<'_> {
    fn universe_size(&self) -> usize {
        self.graph.n()
    }

    fn contains(&self, s: &Subset) -> bool {
        self.graph.edges().iter().all(|&(u, v)| s.contains(u) || s.contains(v))
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Exact extension by 2-way branching on uncovered edges: `α = 1`, `c = 2`.
pub struct VcExactOracle {
    n: usize,
    /// Lexicographically sorted, so the first uncovered edge found is the
    /// lexicographically first one.
    sorted_edges: Vec<(usize, usize)>,
}

impl VcExactOracle {
    pub fn new(g: &Graph) -> Self {
        let mut sorted_edges = g.edges().to_vec();
        sorted_edges.sort_unstable();
        Self { n: g.n(), sorted_edges }
    }

    fn branch(&self, taken: &mut [bool], chosen: &mut Vec<usize>, budget: usize) -> bool {
        let Some(&(u, v)) = self.sorted_edges.iter().find(|&&(u, v)| !taken[u] && !taken[v]) else {
            return true;
        };
        if budget == 0 {
            return false;
        }
        for w in [u, v] {
            taken[w] = true;
            chosen.push(w);
            if self.branch(taken, chosen, budget - 1) {
                return true;
            }
            chosen.pop();
            taken[w] = false;
        }
        false
    }
}

/// Exact extension: a vertex cover of `G - X` with at most `k` vertices, or `None`.
pub fn vc_extend_exact(g: &Graph, x: &Subset, k: usize) -> Option<Subset> {
    VcExactOracle::new(g).extend_det(x, k)
}

impl VcExactOracle {
    fn extend_det(&self, x: &Subset, budget: usize) -> Option<Subset> {
        let mut taken: Vec<bool> = (0..self.n).map(|v| x.contains(v)).collect();
        let mut chosen = Vec::new();
        self.branch(&mut taken, &mut chosen, budget)
            .then(|| Subset::from_elements(self.n, chosen))
    }
}

impl ExtensionOracle for VcExactOracle {
    fn alpha(&self) -> f64 {
        1.0
    }

    fn c(&self) -> f64 {
        2.0
    }

    fn extend(&self, x: &Subset, budget: usize, _rng: &mut dyn RngCore) -> Option<Subset> {
        self.extend_det(x, budget)
    }
}

/// Polynomial-time 2-approximate extension from a greedy maximal matching of
/// `G - X`, scanning edges in stored order: `α = 2`, `c = 1`.
pub struct VcMatchingOracle<'g> {
    graph: &'g Graph,
}

impl<'g> VcMatchingOracle<'g> {
    pub fn new(g: &'g Graph) -> Self {
        Self { graph: g }
    }
}

/// Endpoints of a greedy maximal matching of `G - X`, or `None` if the
/// matching has more than `k` edges.
pub fn vc_extend_matching(g: &Graph, x: &Subset, k: usize) -> Option<Subset> {
    let mut matched = Subset::empty(g.n());
    let mut size = 0usize;
    for &(u, v) in g.edges() {
        if x.contains(u) || x.contains(v) || matched.contains(u) || matched.contains(v) {
            continue;
        }
        matched.insert(u);
        matched.insert(v);
        size += 1;
        if size > k {
            return None;
        }
    }
    Some(matched)
}

impl ExtensionOracle for VcMatchingOracle<'_> {
    fn alpha(&self) -> f64 {
        2.0
    }

    fn c(&self) -> f64 {
        1.0
    }

    fn extend(&self, x: &Subset, budget: usize, _rng: &mut dyn RngCore) -> Option<Subset> {
        vc_extend_matching(self.graph, x, budget)
    }
}
