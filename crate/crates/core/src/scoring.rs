//! Candidate hyperedge scoring.
//!
//! Three walk-based indices built on rows of the superposed walk matrix
//! (LRW, LRW-JS, LRW-GJS) and three pairwise baselines (HCN, HKatz, HPRA).
//! Pairwise methods score a hyperedge as the mean similarity over its
//! unordered vertex pairs. Every scorer sorts the edge first, so results do
//! not depend on the order in which vertices are listed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergence::{js, js_generalized, Weights};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::localwalk::{walk_rows_multi, WalkDistribution, DEFAULT_DROP_TOLERANCE};
use crate::projection::{adjacency, spectral_radius, transition, weighted_projection};
use crate::sparse::SparseMatrix;

/// Walk rows keyed by source vertex.
pub type WalkRows = BTreeMap<VertexId, WalkDistribution>;

/// Above this many vertices HKatz switches from the closed form to the
/// truncated series.
pub const KATZ_CLOSED_FORM_MAX_VERTICES: usize = 20_000;
pub const KATZ_DEFAULT_TERMS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "LRW")]
    Lrw,
    #[serde(rename = "LRW-JS")]
    LrwJs,
    #[serde(rename = "LRW-GJS")]
    LrwGjs,
    #[serde(rename = "HCN")]
    Hcn,
    #[serde(rename = "HKatz")]
    HKatz,
    #[serde(rename = "HPRA")]
    Hpra,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Hcn,
        Method::HKatz,
        Method::Hpra,
        Method::Lrw,
        Method::LrwJs,
        Method::LrwGjs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Lrw => "LRW",
            Method::LrwJs => "LRW-JS",
            Method::LrwGjs => "LRW-GJS",
            Method::Hcn => "HCN",
            Method::HKatz => "HKatz",
            Method::Hpra => "HPRA",
        }
    }

    pub fn uses_walks(self) -> bool {
        matches!(self, Method::Lrw | Method::LrwJs | Method::LrwGjs)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match norm.as_str() {
            "lrw" => Method::Lrw,
            "lrw-js" => Method::LrwJs,
            "lrw-gjs" => Method::LrwGjs,
            "hcn" => Method::Hcn,
            "hkatz" | "katz" => Method::HKatz,
            "hpra" | "hpra-chs" => Method::Hpra,
            _ => return Err(Error::Parameter(format!("unknown method {s:?}"))),
        })
    }
}

/// How the Katz series is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KatzEval {
    /// Closed form up to [`KATZ_CLOSED_FORM_MAX_VERTICES`], truncated series
    /// with [`KATZ_DEFAULT_TERMS`] terms beyond.
    Auto,
    /// `(I − βA)⁻¹ − I` through one linear solve per needed column.
    Closed,
    /// `Σ_{l=1..L} βˡ Aˡ`.
    Truncated(usize),
}

/// A method together with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub method: Method,
    /// Maximum walk length for the walk-based methods.
    pub k: usize,
    /// Damping factor for HKatz.
    pub beta: f64,
    pub katz: KatzEval,
}

impl MethodSpec {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            k: 2,
            beta: 0.01,
            katz: KatzEval::Auto,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_katz(mut self, katz: KatzEval) -> Self {
        self.katz = katz;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredEdge {
    pub edge: Vec<VertexId>,
    pub score: f64,
    pub method: MethodSpec,
}

fn sorted(edge: &[VertexId]) -> Vec<VertexId> {
    let mut e = edge.to_vec();
    e.sort_unstable();
    e
}

fn pair_mean(edge: &[VertexId], mut sim: impl FnMut(VertexId, VertexId) -> Result<f64>) -> Result<f64> {
    let e = sorted(edge);
    let t = e.len();
    if t < 2 {
        return Err(Error::Parameter(format!("hyperedge {e:?} has fewer than two vertices")));
    }
    let mut total = 0.0;
    for a in 0..t {
        for b in a + 1..t {
            total += sim(e[a], e[b])?;
        }
    }
    Ok(2.0 * total / (t * (t - 1)) as f64)
}

fn row(rows: &WalkRows, v: VertexId) -> Result<&WalkDistribution> {
    rows.get(&v)
        .ok_or_else(|| Error::Parameter(format!("walk row for vertex {v} was not computed")))
}

/// LRW: mean of `s_ij + s_ji` over vertex pairs.
pub fn score_lrw(edge: &[VertexId], rows: &WalkRows) -> Result<f64> {
    pair_mean(edge, |i, j| Ok(row(rows, i)?.get(j) + row(rows, j)?.get(i)))
}

/// LRW-JS: one minus the mean pairwise Jensen-Shannon divergence.
pub fn score_lrw_js(edge: &[VertexId], rows: &WalkRows) -> Result<f64> {
    let mean = pair_mean(edge, |i, j| Ok(js(row(rows, i)?, row(rows, j)?)))?;
    Ok((1.0 - mean).clamp(0.0, 1.0))
}

/// LRW-GJS: one minus the uniform-weight generalized JS divergence of all
/// rows in the edge, normalized by `log2 |e|`.
pub fn score_lrw_gjs(edge: &[VertexId], rows: &WalkRows) -> Result<f64> {
    let e = sorted(edge);
    let t = e.len();
    if t < 2 {
        return Err(Error::Parameter(format!("hyperedge {e:?} has fewer than two vertices")));
    }
    let dists = e.iter().map(|&v| row(rows, v)).collect::<Result<Vec<_>>>()?;
    let g = js_generalized(&dists, &Weights::uniform(t))?;
    Ok((1.0 - g / (t as f64).log2()).clamp(0.0, 1.0))
}

/// Number of shared clique-expansion neighbours, from adjacency rows.
pub fn common_neighbors(a: &SparseMatrix, i: VertexId, j: VertexId) -> usize {
    let (x, _) = a.row(i as usize);
    let (y, _) = a.row(j as usize);
    let (mut p, mut q, mut count) = (0, 0, 0);
    while p < x.len() && q < y.len() {
        match x[p].cmp(&y[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                p += 1;
                q += 1;
            }
        }
    }
    count
}

/// HCN: mean common-neighbour count over vertex pairs.
pub fn score_hcn(edge: &[VertexId], a: &SparseMatrix) -> Result<f64> {
    pair_mean(edge, |i, j| Ok(common_neighbors(a, i, j) as f64))
}

/// HRA similarity `(W + W D_v⁻¹ W)_ij`.
pub fn resource_allocation(w: &SparseMatrix, degrees: &[usize], i: VertexId, j: VertexId) -> f64 {
    let (xi, xv) = w.row(i as usize);
    let (yi, yv) = w.row(j as usize);
    let (mut p, mut q, mut two_hop) = (0, 0, 0.0);
    // W is symmetric, so w_kj is read from row j
    while p < xi.len() && q < yi.len() {
        match xi[p].cmp(&yi[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                two_hop += xv[p] * yv[q] / degrees[xi[p] as usize] as f64;
                p += 1;
                q += 1;
            }
        }
    }
    w.get(i as usize, j as usize) + two_hop
}

/// HPRA: mean HRA similarity over vertex pairs.
pub fn score_hpra(edge: &[VertexId], w: &SparseMatrix, degrees: &[usize]) -> Result<f64> {
    pair_mean(edge, |i, j| Ok(resource_allocation(w, degrees, i, j)))
}

/// Katz similarity columns `Σ_{l≥1} βˡ (Aˡ)_{·j}` for a set of vertices.
#[derive(Debug, Clone)]
pub struct KatzColumns {
    columns: BTreeMap<VertexId, Vec<f64>>,
}

impl KatzColumns {
    pub fn compute(a: &SparseMatrix, vertices: &[VertexId], beta: f64, eval: KatzEval) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Parameter(format!("Katz beta must be positive, got {beta}")));
        }
        let eval = match eval {
            KatzEval::Auto if a.rows() <= KATZ_CLOSED_FORM_MAX_VERTICES => KatzEval::Closed,
            KatzEval::Auto => KatzEval::Truncated(KATZ_DEFAULT_TERMS),
            other => other,
        };
        if let KatzEval::Closed = eval {
            let radius = spectral_radius(a);
            if beta * radius >= 1.0 {
                return Err(Error::KatzDivergence {
                    beta,
                    limit: 1.0 / radius,
                });
            }
        }
        if let KatzEval::Truncated(0) = eval {
            return Err(Error::Parameter("truncated Katz needs at least one term".into()));
        }
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let cols: Vec<Vec<f64>> = vs
            .par_iter()
            .map(|&j| match eval {
                KatzEval::Truncated(terms) => katz_series(a, j, beta, terms),
                _ => katz_solve(a, j, beta),
            })
            .collect();
        Ok(Self {
            columns: vs.into_iter().zip(cols).collect(),
        })
    }

    pub fn similarity(&self, i: VertexId, j: VertexId) -> Result<f64> {
        let col = self
            .columns
            .get(&j)
            .ok_or_else(|| Error::Parameter(format!("Katz column for vertex {j} was not computed")))?;
        Ok(col[i as usize])
    }
}

fn katz_series(a: &SparseMatrix, j: VertexId, beta: f64, terms: usize) -> Vec<f64> {
    let n = a.rows();
    let mut x = vec![0.0; n];
    x[j as usize] = 1.0;
    let mut acc = vec![0.0; n];
    for _ in 0..terms {
        x = a.mul_vec(&x);
        x.iter_mut().for_each(|v| *v *= beta);
        acc.iter_mut().zip(&x).for_each(|(s, v)| *s += v);
    }
    acc
}

/// Solves `(I − βA) x = e_j` by conjugate gradients and returns `x − e_j`.
/// `I − βA` is symmetric positive definite when `β ρ(A) < 1`.
fn katz_solve(a: &SparseMatrix, j: VertexId, beta: f64) -> Vec<f64> {
    let n = a.rows();
    let apply = |x: &[f64]| -> Vec<f64> {
        let ax = a.mul_vec(x);
        x.iter().zip(ax).map(|(xi, axi)| xi - beta * axi).collect()
    };
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    // start from e_j: the residual is then βA e_j
    let mut x = vec![0.0; n];
    x[j as usize] = 1.0;
    let mut r: Vec<f64> = {
        let mut b = vec![0.0; n];
        b[j as usize] = 1.0;
        let ax = apply(&x);
        b.iter().zip(ax).map(|(bi, axi)| bi - axi).collect()
    };
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for _ in 0..(10 * n + 100) {
        if rr.sqrt() <= 1e-15 {
            break;
        }
        let ap = apply(&p);
        let alpha = rr / dot(&p, &ap);
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.iter_mut().zip(&ap).for_each(|(ri, api)| *ri -= alpha * api);
        let next = dot(&r, &r);
        let scale = next / rr;
        rr = next;
        p.iter_mut().zip(&r).for_each(|(pi, ri)| *pi = ri + scale * *pi);
    }
    x[j as usize] -= 1.0;
    x
}

/// HKatz: mean Katz similarity over vertex pairs.
pub fn score_hkatz(edge: &[VertexId], katz: &KatzColumns) -> Result<f64> {
    pair_mean(edge, |i, j| katz.similarity(i, j))
}

/// Matrices of one hypergraph, built on first use and shared across methods.
pub struct Scorer<'g> {
    graph: &'g Hypergraph,
    adjacency: OnceLock<SparseMatrix>,
    weighted: OnceLock<SparseMatrix>,
    transition: OnceLock<SparseMatrix>,
    degrees: Vec<usize>,
    drop_tolerance: f64,
}

impl<'g> Scorer<'g> {
    pub fn new(graph: &'g Hypergraph) -> Self {
        Self {
            graph,
            adjacency: OnceLock::new(),
            weighted: OnceLock::new(),
            transition: OnceLock::new(),
            degrees: graph.degrees(),
            drop_tolerance: DEFAULT_DROP_TOLERANCE,
        }
    }

    pub fn with_drop_tolerance(mut self, tol: f64) -> Self {
        self.drop_tolerance = tol;
        self
    }

    pub fn graph(&self) -> &Hypergraph {
        self.graph
    }

    pub fn adjacency(&self) -> &SparseMatrix {
        self.adjacency.get_or_init(|| adjacency(self.graph))
    }

    pub fn weighted(&self) -> &SparseMatrix {
        self.weighted.get_or_init(|| weighted_projection(self.graph))
    }

    pub fn transition(&self) -> Result<&SparseMatrix> {
        if let Some(p) = self.transition.get() {
            return Ok(p);
        }
        let p = transition(self.graph)?;
        Ok(self.transition.get_or_init(|| p))
    }

    fn validate(&self, candidates: &[Vec<VertexId>]) -> Result<()> {
        let n = self.graph.num_vertices() as VertexId;
        for e in candidates {
            if e.iter().any(|&v| v >= n) {
                return Err(Error::UnknownCandidateVertex {
                    edge: e.iter().map(|v| v.to_string()).collect(),
                });
            }
            if sorted(e).windows(2).any(|w| w[0] == w[1]) || e.len() < 2 {
                return Err(Error::Parameter(format!("candidate {e:?} is not a set of >= 2 vertices")));
            }
        }
        Ok(())
    }

    /// Walk rows at each depth for every vertex appearing in `candidates`.
    pub fn walk_rows(&self, candidates: &[Vec<VertexId>], depths: &[usize]) -> Result<BTreeMap<usize, WalkRows>> {
        let sources = candidate_vertices(candidates);
        walk_rows_multi(self.transition()?, &sources, depths, self.drop_tolerance)
    }

    /// Scores every candidate with a walk-based method for each `k`, reusing
    /// one propagation. Returns one score vector per entry of `ks`.
    pub fn score_walk_grid(&self, method: Method, ks: &[usize], candidates: &[Vec<VertexId>]) -> Result<Vec<Vec<f64>>> {
        assert!(method.uses_walks());
        self.validate(candidates)?;
        let rows = self.walk_rows(candidates, ks)?;
        ks.iter()
            .map(|k| {
                let rows = &rows[k];
                candidates
                    .par_iter()
                    .map(|e| match method {
                        Method::Lrw => score_lrw(e, rows),
                        Method::LrwJs => score_lrw_js(e, rows),
                        _ => score_lrw_gjs(e, rows),
                    })
                    .collect()
            })
            .collect()
    }

    /// Raw scores in candidate order.
    pub fn scores(&self, spec: &MethodSpec, candidates: &[Vec<VertexId>]) -> Result<Vec<f64>> {
        self.validate(candidates)?;
        match spec.method {
            m if m.uses_walks() => Ok(self.score_walk_grid(m, &[spec.k], candidates)?.remove(0)),
            Method::Hcn => {
                let a = self.adjacency();
                candidates.par_iter().map(|e| score_hcn(e, a)).collect()
            }
            Method::Hpra => {
                let w = self.weighted();
                candidates.par_iter().map(|e| score_hpra(e, w, &self.degrees)).collect()
            }
            _ => {
                let katz = KatzColumns::compute(
                    self.adjacency(),
                    &candidate_vertices(candidates),
                    spec.beta,
                    spec.katz,
                )?;
                candidates.par_iter().map(|e| score_hkatz(e, &katz)).collect()
            }
        }
    }

    pub fn score_candidates(&self, spec: &MethodSpec, candidates: &[Vec<VertexId>]) -> Result<Vec<ScoredEdge>> {
        let scores = self.scores(spec, candidates)?;
        Ok(candidates
            .iter()
            .zip(scores)
            .map(|(e, score)| ScoredEdge {
                edge: e.clone(),
                score,
                method: *spec,
            })
            .collect())
    }
}

/// One score per candidate, in input order. Candidate vertex ids refer to
/// `g`.
pub fn score_candidates(spec: &MethodSpec, g: &Hypergraph, candidates: &[Vec<VertexId>]) -> Result<Vec<ScoredEdge>> {
    Scorer::new(g).score_candidates(spec, candidates)
}

/// Sorted union of the vertices of all candidates.
pub fn candidate_vertices(candidates: &[Vec<VertexId>]) -> Vec<VertexId> {
    let mut v: Vec<VertexId> = candidates.iter().flatten().copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}
