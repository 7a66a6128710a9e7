//! Approximate monotone local search.
//!
//! Given a monotone subset-minimization problem and an α-approximate
//! parameterized extension algorithm running in `c^k`, this crate produces
//! α-approximate solutions by sampling a partial solution and extending it,
//! and it evaluates the resulting running-time exponent bases.
//!
//! * [`exponents`]: `amlsbound(α, c)` and the brute / naive / emls benchmarks.
//! * [`combinatorics`]: exact binomials, hypergeometric tails, iteration costs.
//! * [`engine`]: the randomized and derandomized search loops.
//! * [`families`]: set-intersection families and coverings via greedy set cover.
//! * [`problems`]: Vertex Cover and 3-Hitting Set systems with extension oracles.
//! * [`suites`]: self-checking invariant suites used by `amls verify`.

pub mod combinatorics;
pub mod engine;
mod error;
pub mod exponents;
pub mod families;
pub mod problems;
pub mod subset;
pub mod suites;

pub use error::{Error, Result};
pub use subset::Subset;
