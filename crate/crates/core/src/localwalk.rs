//! Rows of the superposed local random walk matrix `S = (1/K) Σ_{k=1..K} Pᵏ`.
//!
//! A row `S_i` is the stop distribution of a walker that leaves `i`, draws a
//! length uniformly from `1..=K` and follows `P` for that many steps. Rows
//! are produced by `K` sparse vector–matrix propagations from the one-hot
//! vector at `i`; only the requested sources are ever computed.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::VertexId;
use crate::sparse::SparseMatrix;

/// Entries of an accumulated row below this are dropped.
pub const DEFAULT_DROP_TOLERANCE: f64 = 1e-15;
/// A row is renormalized only if its mass drifts from 1 by more than this.
const RENORMALIZE_DRIFT: f64 = 1e-10;

/// A probability distribution over vertices stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistribution {
    pub source: VertexId,
    pub max_step: usize,
    indices: Vec<u32>,
    probs: Vec<f64>,
}

impl WalkDistribution {
    /// Builds a distribution from sorted, unique indices. Intended for tests
    /// and callers that already hold a valid distribution.
    pub fn from_sorted(source: VertexId, max_step: usize, indices: Vec<u32>, probs: Vec<f64>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(indices.len(), probs.len());
        Self {
            source,
            max_step,
            indices,
            probs,
        }
    }

    /// Distribution from a dense probability vector.
    pub fn from_dense(source: VertexId, probs: &[f64]) -> Self {
        let (indices, probs) = probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0.0)
            .map(|(i, &p)| (i as u32, p))
            .unzip();
        Self::from_sorted(source, 0, indices, probs)
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn support_len(&self) -> usize {
        self.indices.len()
    }

    pub fn get(&self, v: VertexId) -> f64 {
        match self.indices.binary_search(&v) {
            Ok(k) => self.probs[k],
            Err(_) => 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.indices.iter().copied().zip(self.probs.iter().copied())
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (i, p) in self.iter() {
            out[i as usize] = p;
        }
        out
    }
}

/// Reusable dense workspace for one propagation.
struct Scratch {
    acc: Vec<f64>,
    touched: Vec<u32>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            acc: vec![0.0; n],
            touched: Vec::new(),
        }
    }

    fn add(&mut self, j: u32, v: f64) {
        if v == 0.0 {
            return;
        }
        let slot = &mut self.acc[j as usize];
        if *slot == 0.0 {
            self.touched.push(j);
        }
        *slot += v;
    }

    /// Moves the accumulated entries out as a sorted sparse vector.
    fn drain_sorted(&mut self) -> (Vec<u32>, Vec<f64>) {
        self.touched.sort_unstable();
        let mut idx = Vec::with_capacity(self.touched.len());
        let mut val = Vec::with_capacity(self.touched.len());
        for &j in &self.touched {
            let v = std::mem::take(&mut self.acc[j as usize]);
            if v != 0.0 {
                idx.push(j);
                val.push(v);
            }
        }
        self.touched.clear();
        (idx, val)
    }
}

/// Walk rows for one source at every depth in `depths` (ascending, unique,
/// all ≥ 1) from a single propagation up to the largest depth.
fn propagate(
    p: &SparseMatrix,
    source: VertexId,
    depths: &[usize],
    drop_tol: f64,
    step: &mut Scratch,
    sum: &mut Scratch,
) -> Vec<WalkDistribution> {
    let max_k = *depths.last().expect("at least one depth");
    let mut cur_idx = vec![source];
    let mut cur_val = vec![1.0];
    let mut out = Vec::with_capacity(depths.len());
    let mut want = depths.iter().peekable();
    for k in 1..=max_k {
        for (&u, &mass) in cur_idx.iter().zip(&cur_val) {
            let (cols, probs) = p.row(u as usize);
            for (&j, &pj) in cols.iter().zip(probs) {
                step.add(j, mass * pj);
            }
        }
        if k == max_k {
            for &j in &step.touched {
                sum.add(j, std::mem::take(&mut step.acc[j as usize]));
            }
            step.touched.clear();
        } else {
            let (idx, val) = step.drain_sorted();
            for (&j, &v) in idx.iter().zip(&val) {
                sum.add(j, v);
            }
            cur_idx = idx;
            cur_val = val;
        }
        if want.peek() == Some(&&k) {
            want.next();
            out.push(snapshot(sum, source, k, drop_tol));
        }
    }
    sum.touched.iter().for_each(|&j| sum.acc[j as usize] = 0.0);
    sum.touched.clear();
    out
}

/// Reads the running sum without clearing it and scales by `1/k`.
fn snapshot(sum: &mut Scratch, source: VertexId, k: usize, drop_tol: f64) -> WalkDistribution {
    sum.touched.sort_unstable();
    let inv_k = 1.0 / k as f64;
    let mut indices = Vec::with_capacity(sum.touched.len());
    let mut probs = Vec::with_capacity(sum.touched.len());
    for &j in &sum.touched {
        let v = sum.acc[j as usize] * inv_k;
        if v >= drop_tol && v != 0.0 {
            indices.push(j);
            probs.push(v);
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > RENORMALIZE_DRIFT && total > 0.0 {
        probs.iter_mut().for_each(|v| *v /= total);
    }
    WalkDistribution {
        source,
        max_step: k,
        indices,
        probs,
    }
}

fn check_depths(depths: &[usize]) -> Result<Vec<usize>> {
    if depths.is_empty() || depths.contains(&0) {
        return Err(Error::Parameter("walk length K must be at least 1".into()));
    }
    let mut d = depths.to_vec();
    d.sort_unstable();
    d.dedup();
    Ok(d)
}

/// Walk rows `S_i` for each source with maximum step `k`.
pub fn walk_matrix_rows(
    p: &SparseMatrix,
    sources: &[VertexId],
    k: usize,
) -> Result<BTreeMap<VertexId, WalkDistribution>> {
    let mut by_depth = walk_rows_multi(p, sources, &[k], DEFAULT_DROP_TOLERANCE)?;
    Ok(by_depth.remove(&k).unwrap_or_default())
}

/// Walk rows for several maximum steps at once, keyed by depth then source.
///
/// Sources are processed in parallel; the result does not depend on the
/// scheduling. Sources must be valid row indices of `p`.
pub fn walk_rows_multi(
    p: &SparseMatrix,
    sources: &[VertexId],
    depths: &[usize],
    drop_tol: f64,
) -> Result<BTreeMap<usize, BTreeMap<VertexId, WalkDistribution>>> {
    let depths = check_depths(depths)?;
    if let Some(&bad) = sources.iter().find(|&&s| s as usize >= p.rows()) {
        return Err(Error::Parameter(format!("source vertex {bad} out of range")));
    }
    let mut sources = sources.to_vec();
    sources.sort_unstable();
    sources.dedup();
    let n = p.cols();
    let rows: Vec<Vec<WalkDistribution>> = sources
        .par_iter()
        .map_init(
            || (Scratch::new(n), Scratch::new(n)),
            |(step, sum), &s| propagate(p, s, &depths, drop_tol, step, sum),
        )
        .collect();
    let mut columns: Vec<Vec<(VertexId, WalkDistribution)>> =
        depths.iter().map(|_| Vec::with_capacity(sources.len())).collect();
    for (s, per_depth) in sources.iter().zip(rows) {
        for (col, row) in columns.iter_mut().zip(per_depth) {
            col.push((*s, row));
        }
    }
    Ok(depths
        .iter()
        .zip(columns)
        .map(|(&d, col)| (d, col.into_iter().collect()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{Hypergraph, LoadOptions};
    use crate::projection::transition;

    fn toy_p() -> SparseMatrix {
        let g = Hypergraph::parse("1,2,3\n3,4\n", LoadOptions::default()).unwrap();
        transition(&g).unwrap()
    }

    #[test]
    fn k1_is_row_of_p() {
        let rows = walk_matrix_rows(&toy_p(), &[0], 1).unwrap();
        assert_eq!(rows[&0].to_dense(4), vec![0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn k2_matches_hand_value() {
        let rows = walk_matrix_rows(&toy_p(), &[0], 2).unwrap();
        let expect = [3.0 / 16.0, 5.0 / 16.0, 3.0 / 8.0, 1.0 / 8.0];
        for (got, want) in rows[&0].to_dense(4).iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_k_rejected() {
        assert!(matches!(walk_matrix_rows(&toy_p(), &[0], 0), Err(Error::Parameter(_))));
        assert!(walk_matrix_rows(&toy_p(), &[9], 1).is_err());
    }

    #[test]
    fn only_requested_sources_computed() {
        let rows = walk_matrix_rows(&toy_p(), &[3, 1, 3], 3).unwrap();
        assert_eq!(rows.keys().copied().collect::<Vec<_>>(), vec![1, 3]);
        for r in rows.values() {
            assert!((r.total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn multi_depth_equals_single_depth() {
        let p = toy_p();
        let multi = walk_rows_multi(&p, &[0, 1, 2, 3], &[4, 2, 3], DEFAULT_DROP_TOLERANCE).unwrap();
        for k in 2..=4 {
            let single = walk_matrix_rows(&p, &[0, 1, 2, 3], k).unwrap();
            assert_eq!(multi[&k], single);
        }
    }
}
