//! Concrete monotone systems: Vertex Cover and 3-Hitting Set.

mod graph;
mod hs3;
mod vc;

pub use graph::{gen_gnp, gen_planted_vc, parse_graph, parse_hypergraph, Graph, Hypergraph3};
pub use hs3::{hs3_extend_exact, hs3_system, Hs3ExactOracle, Hs3System};
pub use vc::{vc_extend_exact, vc_extend_matching, vc_system, VcExactOracle, VcMatchingOracle, VcSystem};
