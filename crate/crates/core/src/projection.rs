//! Pairwise projections of a hypergraph: adjacency `A`, weighted projection
//! `W` and the random-walk transition matrix `P = D_v⁻¹ W`.
//!
//! All three share the clique-expansion sparsity pattern and are built by
//! accumulating over each vertex's incident hyperedges, so the cost is
//! `O(Σ_e |e|²)` rather than a dense `H Hᵀ` product.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::sparse::SparseMatrix;

/// Builds one row per vertex; `weight(|e|)` is the contribution of a shared
/// hyperedge of that cardinality.
fn accumulate(g: &Hypergraph, weight: impl Fn(usize) -> f64 + Sync) -> SparseMatrix {
    let n = g.num_vertices();
    let rows: Vec<Vec<(u32, f64)>> = (0..n as u32)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::new();
            for &e in g.incident_edges(i) {
                let edge = g.edge(e as usize);
                let w = weight(edge.len());
                row.extend(edge.iter().filter(|&&j| j != i).map(|&j| (j, w)));
            }
            row
        })
        .collect();
    SparseMatrix::from_rows(n, rows)
}

/// `A = H Hᵀ − D_v`: `a_ij` counts hyperedges containing both `i` and `j`.
pub fn adjacency(g: &Hypergraph) -> SparseMatrix {
    accumulate(g, |_| 1.0)
}

/// `W = H (D_e − I)⁻¹ Hᵀ` with the diagonal removed. Row sums equal the
/// vertex degrees.
pub fn weighted_projection(g: &Hypergraph) -> SparseMatrix {
    accumulate(g, |card| 1.0 / (card - 1) as f64)
}

/// Row-stochastic transition matrix of the vertex → hyperedge → vertex walk.
///
/// Fails if any vertex has no incident hyperedge.
pub fn transition(g: &Hypergraph) -> Result<SparseMatrix> {
    let degrees = g.degrees();
    if let Some(v) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedVertex { vertex: v });
    }
    let inv: Vec<f64> = degrees.iter().map(|&d| 1.0 / d as f64).collect();
    Ok(weighted_projection(g).scale_rows(&inv))
}

/// Largest eigenvalue of a symmetric nonnegative matrix by power iteration.
pub fn spectral_radius(a: &SparseMatrix) -> f64 {
    let n = a.rows();
    if n == 0 || a.nnz() == 0 {
        return 0.0;
    }
    // A + I shares eigenvectors with A and makes the dominant eigenvalue
    // strictly largest in modulus even for bipartite graphs
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda = 0.0;
    for _ in 0..10_000 {
        let mut y = a.mul_vec(&x);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        y.iter_mut().for_each(|v| *v /= norm);
        let next = norm - 1.0;
        let converged = (next - lambda).abs() <= 1e-12 * next.abs().max(1.0);
        lambda = next;
        x = y;
        if converged {
            break;
        }
    }
    lambda
}
