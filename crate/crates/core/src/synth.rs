//! Random hypergraph generators for benchmarks and property tests.

use rand::seq::index;
use rand::Rng;

use crate::error::Result;
use crate::experiment::rng_from;
use crate::hypergraph::Hypergraph;

/// `m` hyperedges of exactly `cardinality` vertices drawn uniformly from
/// `0..n`. Duplicates collapse, and vertices left uncovered are dropped.
pub fn uniform(n: usize, m: usize, cardinality: usize, seed: u64) -> Result<Hypergraph> {
    let mut rng = rng_from(seed);
    let edges: Vec<Vec<usize>> = (0..m)
        .map(|_| index::sample(&mut rng, n, cardinality).into_vec())
        .collect();
    Hypergraph::from_edges(edges)
}

/// Uniform hypergraph sized so the clique expansion has mean degree about
/// `d`: each edge of size `s` gives its members `s − 1` neighbours, so
/// `m ≈ n d / (s (s − 1))`.
pub fn with_clique_degree(n: usize, d: f64, cardinality: usize, seed: u64) -> Result<Hypergraph> {
    let s = cardinality as f64;
    let m = (n as f64 * d / (s * (s - 1.0))).round().max(1.0) as usize;
    uniform(n, m, cardinality, seed)
}

/// Small hypergraph with mixed edge sizes in `2..=max_card`, for tests.
pub fn mixed<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, max_card: usize) -> Result<Hypergraph> {
    let edges: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let c = rng.gen_range(2..=max_card.min(n));
            index::sample(rng, n, c).into_vec()
        })
        .collect();
    Hypergraph::from_edges(edges)
}

/// Mean vertex degree of the clique expansion.
pub fn clique_degree(g: &Hypergraph) -> f64 {
    let total: usize = (0..g.num_vertices() as u32).map(|v| g.neighbors(v).len()).sum();
    total as f64 / g.num_vertices() as f64
}
