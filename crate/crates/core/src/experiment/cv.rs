use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::metrics::auroc;
use super::CvSpec;
use crate::scoring::{Method, MethodSpec, Scorer};

/// A hyperparameter value chosen by cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    K(usize),
    Beta(f64),
}

impl Param {
    pub fn apply(self, spec: MethodSpec) -> MethodSpec {
        match self {
            Param::K(k) => spec.with_k(k),
            Param::Beta(b) => spec.with_beta(b),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Param::K(k) => k as f64,
            Param::Beta(b) => b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvOutcome {
    pub chosen: Param,
    /// The grid in ascending order.
    pub grid: Vec<Param>,
    /// Mean validation AUROC per grid entry; `None` where the value could not
    /// be evaluated (e.g. a divergent Katz damping factor).
    pub mean_auroc: Vec<Option<f64>>,
    pub folds_used: usize,
}

/// Splits `ids` into `k` folds whose sizes differ by at most one.
pub fn make_folds<R: Rng + ?Sized>(ids: &[usize], k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut shuffled = ids.to_vec();
    shuffled.shuffle(rng);
    let mut folds = vec![Vec::new(); k];
    for (i, id) in shuffled.into_iter().enumerate() {
        folds[i % k].push(id);
    }
    folds
}

/// Maps an edge of the parent hypergraph into a sub-hypergraph; `None` if a
/// vertex has no edge there.
fn remap(edge: &[VertexId], map: &[Option<VertexId>]) -> Option<Vec<VertexId>> {
    edge.iter().map(|&v| map[v as usize]).collect()
}

/// Index of the largest defined value; the first one wins ties.
pub fn best_index(means: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, m) in means.iter().enumerate() {
        if let Some(m) = *m {
            if best.is_none_or(|(_, b)| m > b) {
                best = Some((i, m));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Picks the grid value with the highest mean validation AUROC.
///
/// `observed` are edge ids of `g` (`E^o`); `negatives` are candidate edges in
/// `g`'s vertex ids (`E^c`), used as negatives in every fold. Each fold in
/// turn is held out as the positives while the remaining folds form the
/// training hypergraph. Held-out edges and negatives touching a vertex
/// without training edges are left out of that fold. Ties go to the smaller
/// parameter.
pub fn cross_validate<R: Rng + ?Sized>(
    g: &Hypergraph,
    method: Method,
    observed: &[usize],
    negatives: &[Vec<VertexId>],
    cv: &CvSpec,
    grid: &[Param],
    rng: &mut R,
) -> Result<CvOutcome> {
    let (folds, katz) = (cv.folds, cv.katz);
    if grid.is_empty() {
        return Err(Error::Parameter(format!("empty parameter grid for {method}")));
    }
    let mut grid_sorted = grid.to_vec();
    grid_sorted.sort_by(|a, b| a.value().total_cmp(&b.value()));
    if grid_sorted.len() == 1 {
        return Ok(CvOutcome {
            chosen: grid_sorted[0],
            grid: grid_sorted,
            mean_auroc: vec![None],
            folds_used: 0,
        });
    }
    if folds < 2 {
        return Err(Error::Parameter(format!("cross-validation needs at least 2 folds, got {folds}")));
    }
    if observed.len() < folds {
        return Err(Error::Parameter(format!(
            "{} observed edges cannot fill {folds} folds",
            observed.len()
        )));
    }
    let parts = make_folds(observed, folds, rng);
    let mut sums = vec![0.0; grid_sorted.len()];
    let mut valid = vec![true; grid_sorted.len()];
    let mut used = 0;
    for (f, held_out) in parts.iter().enumerate() {
        let training: Vec<usize> = parts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != f)
            .flat_map(|(_, p)| p.iter().copied())
            .collect();
        let (train, map) = g.with_edge_subset(&training);
        let mut candidates: Vec<Vec<VertexId>> = held_out.iter().filter_map(|&e| remap(g.edge(e), &map)).collect();
        let n_pos = candidates.len();
        candidates.extend(negatives.iter().filter_map(|e| remap(e, &map)));
        let n_neg = candidates.len() - n_pos;
        if n_pos == 0 || n_neg == 0 {
            log::debug!("{method}: fold {f} has {n_pos} positives and {n_neg} negatives; skipped");
            continue;
        }
        let labels: Vec<bool> = (0..candidates.len()).map(|i| i < n_pos).collect();
        let scorer = Scorer::new(&train).with_drop_tolerance(cv.drop_tolerance);
        let per_param: Vec<Option<Vec<f64>>> = if method.uses_walks() {
            let ks: Vec<usize> = grid_sorted
                .iter()
                .map(|p| match p {
                    Param::K(k) => Ok(*k),
                    Param::Beta(_) => Err(Error::Parameter(format!("{method} takes a K grid"))),
                })
                .collect::<Result<_>>()?;
            scorer.score_walk_grid(method, &ks, &candidates)?.into_iter().map(Some).collect()
        } else {
            grid_sorted
                .iter()
                .map(|p| {
                    let spec = p.apply(MethodSpec::new(method).with_katz(katz));
                    match scorer.scores(&spec, &candidates) {
                        Ok(s) => Ok(Some(s)),
                        Err(Error::KatzDivergence { beta, limit }) => {
                            log::info!("{method}: beta {beta} exceeds 1/spectral radius {limit:.6}; excluded");
                            Ok(None)
                        }
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<_>>()?
        };
        for (i, scores) in per_param.into_iter().enumerate() {
            match scores {
                Some(s) => sums[i] += auroc(&s, &labels)?,
                None => valid[i] = false,
            }
        }
        used += 1;
    }
    if used == 0 {
        return Err(Error::Parameter(format!("{method}: no usable cross-validation fold")));
    }
    let mean_auroc: Vec<Option<f64>> = sums
        .iter()
        .zip(&valid)
        .map(|(&s, &ok)| ok.then(|| s / used as f64))
        .collect();
    let idx = best_index(&mean_auroc)
        .ok_or_else(|| Error::Parameter(format!("{method}: no grid value could be evaluated")))?;
    Ok(CvOutcome {
        chosen: grid_sorted[idx],
        grid: grid_sorted,
        mean_auroc,
        folds_used: used,
    })
}
