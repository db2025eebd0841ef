//! Seeded generation of test corpora. All randomness flows from a single
//! 64-bit seed through SplitMix64, chosen because it is trivial to
//! reproduce in any language:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! Derived draws are documented on each generator; byte-identical outputs
//! across runs and platforms are a contract, not an accident.

use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};
use crate::pareto::{QualityVector, VectorDigraph};
use crate::rails::ProblemInstance;

/// SplitMix64 pseudo-random generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// A value in `0..bound`, as `next_u64() % bound`. The modulo bias is
    /// irrelevant at the tiny bounds used here and keeps the draw trivially
    /// portable.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    /// A fair coin: the low bit of `next_u64()`.
    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

/// A uniform random tournament: every unordered pair `{u, v}` with `u < v`,
/// visited in lexicographic order, is oriented `u -> v` on heads and
/// `v -> u` on tails (one coin per pair).
pub fn random_tournament(n: usize, rng: &mut SplitMix64) -> Result<Digraph> {
    let mut g = Digraph::new(n)?;
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.coin() {
                g.add_edge(u, v)?;
            } else {
                g.add_edge(v, u)?;
            }
        }
    }
    Ok(g)
}

/// A uniform random digraph: every ordered pair `(u, v)`, `u != v`, visited
/// in lexicographic order, receives an edge on heads (one coin per ordered
/// pair). Antiparallel pairs may coexist.
pub fn random_digraph(n: usize, rng: &mut SplitMix64) -> Result<Digraph> {
    let mut g = Digraph::new(n)?;
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.coin() {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Rejection-samples random digraphs until one is d-path-dominant, giving
/// up after `max_attempts` draws.
pub fn random_dominant_digraph(
    n: usize,
    d: usize,
    max_attempts: usize,
    rng: &mut SplitMix64,
) -> Result<Digraph> {
    for _ in 0..max_attempts {
        let g = random_digraph(n, rng)?;
        if g.is_d_path_dominant(d)? {
            return Ok(g);
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no {d}-path-dominant digraph on {n} vertices found in {max_attempts} attempts"
    )))
}

/// `count` distinct vertices of `0..n` by partial Fisher-Yates: for step
/// `i`, swap position `i` with position `i + below(n - i)` and take the
/// front.
pub fn random_distinct_vertices(n: usize, count: usize, rng: &mut SplitMix64) -> Result<Vec<Vertex>> {
    if count > n {
        return Err(Error::invalid(format!(
            "cannot draw {count} distinct vertices from {n}"
        )));
    }
    let mut pool: Vec<Vertex> = (0..n).collect();
    for i in 0..count {
        let j = i + rng.below((n - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(count);
    Ok(pool)
}

/// An instance on `graph` with `k` terminal pairs drawn as `2k` distinct
/// vertices (`s_i` then `t_i`, pair by pair).
pub fn random_instance(
    graph: Digraph,
    k: usize,
    d: usize,
    rng: &mut SplitMix64,
) -> Result<ProblemInstance> {
    let picks = random_distinct_vertices(graph.vertex_count(), 2 * k, rng)?;
    let terminals = (0..k).map(|i| (picks[2 * i], picks[2 * i + 1])).collect();
    ProblemInstance::new(graph, terminals, d)
}

/// A random weighted digraph for the vector shortest-path engine: node 0
/// is the source, `nodes - 1` the target, each ordered pair receives an
/// edge on heads, and each edge weight draws components `below(cap + 1)`
/// repeatedly until their sum fits in `K_cap`.
pub fn random_vector_digraph(
    nodes: usize,
    arity: usize,
    cap: u32,
    rng: &mut SplitMix64,
) -> Result<VectorDigraph> {
    let mut edges = Vec::new();
    for u in 0..nodes {
        for v in 0..nodes {
            if u == v {
                continue;
            }
            if rng.coin() {
                let weight = loop {
                    let parts: Vec<u32> = (0..arity)
                        .map(|_| rng.below(cap as u64 + 1) as u32)
                        .collect();
                    let w = QualityVector::new(parts);
                    if w.sum() <= cap {
                        break w;
                    }
                };
                edges.push((u, v, weight));
            }
        }
    }
    VectorDigraph::new(nodes, arity, cap, 0, nodes - 1, edges)
}
