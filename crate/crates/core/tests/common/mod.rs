#![allow(dead_code)]

use amls::problems::{Graph, Hypergraph3};
use amls::Subset;

pub fn mask_of(s: &Subset) -> u64 {
    s.iter().fold(0, |m, e| m | (1 << e))
}

pub fn covers_graph(g: &Graph, mask: u64) -> bool {
    g.edges().iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1)
}

/// Minimum size of a set `Y` such that `X ∪ Y` covers every edge, by
/// enumerating all vertex masks.
pub fn min_vc_size(g: &Graph, x: u64) -> usize {
    (0u64..1 << g.n())
        .filter(|&m| covers_graph(g, m | x))
        .map(|m| (m & !x).count_ones() as usize)
        .min()
        .expect("the full vertex set is a cover")
}

pub fn hits_all(h: &Hypergraph3, mask: u64) -> bool {
    h.sets().iter().all(|s| s.iter().any(|&e| mask >> e & 1 == 1))
}

pub fn min_hs_size(h: &Hypergraph3, x: u64) -> usize {
    (0u64..1 << h.n())
        .filter(|&m| hits_all(h, m | x))
        .map(|m| (m & !x).count_ones() as usize)
        .min()
        .expect("the full universe hits every set")
}

/// `⌊α·k⌋` with integer arithmetic on α given in tenths.
pub fn floor_tenths(alpha_tenths: u64, k: u64) -> u64 {
    alpha_tenths * k / 10
}
