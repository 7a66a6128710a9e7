//! Graphs and 3-uniform-at-most hypergraphs, their text formats and random
//! generators.
//!
//! Files use 1-based element numbers; everything in memory is 0-based.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};

/// Simple undirected graph. Edges are stored as `(u, v)` with `u < v`,
/// without duplicates, in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Normalizes each pair to `u < v` and drops repeated edges. Loops and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return domain(format!("edge ({a}, {b}) outside vertex range 0..{n}"));
            }
            if a == b {
                return domain(format!("loop at vertex {a}"));
            }
            let e = (a.min(b), a.max(b));
            if seen.insert(e) {
                out.push(e);
            }
        }
        Ok(Self { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

/// Set family over `{0, .., n-1}` whose sets have 1 to 3 elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph3 {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl Hypergraph3 {
    /// Sorts each set and drops repeated sets.
    pub fn new(n: usize, sets: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for mut s in sets {
            s.sort_unstable();
            if s.is_empty() || s.len() > 3 {
                return domain(format!("set {s:?} must have 1 to 3 elements"));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return domain(format!("set {s:?} repeats an element"));
            }
            if let Some(&e) = s.iter().find(|&&e| e >= n) {
                return domain(format!("element {e} outside range 0..{n}"));
            }
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
        Ok(Self { n, sets: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p hs3 {} {}\n", self.n, self.sets.len());
        for s in &self.sets {
            let items: Vec<String> = s.iter().map(|e| (e + 1).to_string()).collect();
            let _ = writeln!(out, "s {}", items.join(" "));
        }
        out
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Vertex count and the 0-based elements of each item line, with its line number.
type ParsedLines = (usize, Vec<(usize, Vec<usize>)>);

/// Shared skeleton of both formats: `c` comments, one `p <kind> <n> <m>`
/// header, then `m` item lines starting with `item_tag`.
fn parse_lines(text: &str, kind: &str, item_tag: &str, arity: std::ops::RangeInclusive<usize>) -> Result<ParsedLines> {
    let mut header: Option<(usize, usize)> = None;
    let mut items = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let tag = toks.next().expect("non-empty line");
        let rest: Vec<&str> = toks.collect();
        match tag {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(perr(lineno, "duplicate `p` header"));
                }
                if rest.len() != 3 || rest[0] != kind {
                    return Err(perr(lineno, format!("expected `p {kind} <n> <m>`")));
                }
                let n = rest[1]
                    .parse()
                    .map_err(|_| perr(lineno, format!("invalid vertex count `{}`", rest[1])))?;
                let m = rest[2]
                    .parse()
                    .map_err(|_| perr(lineno, format!("invalid item count `{}`", rest[2])))?;
                header = Some((n, m));
            }
            t if t == item_tag => {
                let (n, _) = header.ok_or_else(|| perr(lineno, format!("`{item_tag}` line before `p` header")))?;
                if !arity.contains(&rest.len()) {
                    return Err(perr(
                        lineno,
                        format!("`{item_tag}` line needs {}..={} elements", arity.start(), arity.end()),
                    ));
                }
                let mut elems = Vec::with_capacity(rest.len());
                for tok in rest {
                    let v: usize = tok
                        .parse()
                        .map_err(|_| perr(lineno, format!("invalid element `{tok}`")))?;
                    if v == 0 || v > n {
                        return Err(perr(lineno, format!("element {v} outside 1..={n}")));
                    }
                    elems.push(v - 1);
                }
                items.push((lineno, elems));
            }
            other => return Err(perr(lineno, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| perr(text.lines().count().max(1), format!("missing `p {kind}` header")))?;
    if items.len() != m {
        return Err(perr(
            text.lines().count().max(1),
            format!("header announces {m} items but {} were given", items.len()),
        ));
    }
    Ok((n, items))
}

/// Parses the DIMACS edge format: `c` comments, `p edge <n> <m>`, then `m`
/// lines `e <u> <v>` with 1-based vertices.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let (n, items) = parse_lines(text, "edge", "e", 2..=2)?;
    for (lineno, e) in &items {
        if e[0] == e[1] {
            return Err(perr(*lineno, format!("loop at vertex {}", e[0] + 1)));
        }
    }
    Graph::new(n, items.into_iter().map(|(_, e)| (e[0], e[1])))
}

/// Parses `p hs3 <n> <m>` followed by `m` lines `s <a> [b] [c]`, 1-based.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph3> {
    let (n, items) = parse_lines(text, "hs3", "s", 1..=3)?;
    for (lineno, s) in &items {
        let mut sorted = s.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(perr(*lineno, "set repeats an element"));
        }
    }
    Hypergraph3::new(n, items.into_iter().map(|(_, s)| s))
}

/// Erdős–Rényi `G(n, p)`: each pair `u < v`, in lexicographic order, is an
/// edge with probability `p_edge`.
pub fn gen_gnp(n: usize, p_edge: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p_edge) {
        return domain(format!("edge probability {p_edge} outside [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p_edge) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph { n, edges })
}

/// Random graph with `edges` distinct edges, each touching a random planted
/// set of `cover_size` vertices, so the planted set is a vertex cover.
/// Returns the graph and the sorted planted cover.
pub fn gen_planted_vc(n: usize, cover_size: usize, edges: usize, seed: u64) -> Result<(Graph, Vec<usize>)> {
    if cover_size > n {
        return domain(format!("cover size {cover_size} exceeds n = {n}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices: Vec<usize> = (0..n).collect();
    vertices.shuffle(&mut rng);
    let mut cover = vertices[..cover_size].to_vec();
    cover.sort_unstable();
    let in_cover = |v: usize| cover.binary_search(&v).is_ok();
    let mut pool: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| in_cover(u) || in_cover(v))
        .collect();
    if edges > pool.len() {
        return domain(format!(
            "{edges} edges requested but only {} pairs touch the planted cover",
            pool.len()
        ));
    }
    pool.shuffle(&mut rng);
    let mut chosen = pool[..edges].to_vec();
    chosen.sort_unstable();
    Ok((Graph { n, edges: chosen }, cover))
}
