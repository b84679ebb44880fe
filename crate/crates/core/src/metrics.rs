//! Ranking metrics over labelled candidate scores.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::hypergraph::VertexId;
use crate::scoring::ScoredEdge;

/// Area under the ROC curve in its Mann-Whitney form: the fraction of
/// positive/negative pairs where the positive scores higher, ties counting ½.
///
/// Computed from average ranks in `O(n log n)`. The numerator is a sum of
/// integers and halves, so it agrees exactly with pair enumeration.
pub fn auroc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    assert_eq!(scores.len(), labels.len());
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::MetricUndefined("AUROC needs at least one positive and one negative"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // twice the rank sum of positives, with ranks 1-based and ties averaged
    let mut twice_rank_sum: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share the average (i + j + 2) / 2
        let positives = order[i..=j].iter().filter(|&&k| labels[k]).count() as u128;
        twice_rank_sum += positives * (i + j + 2) as u128;
        i = j + 1;
    }
    let n_pos_u = n_pos as u128;
    let twice_u = twice_rank_sum - n_pos_u * (n_pos_u + 1);
    Ok(twice_u as f64 / 2.0 / (n_pos as f64 * n_neg as f64))
}

pub fn auroc_scored(scored: &[ScoredEdge], labels: &[bool]) -> Result<f64> {
    let scores: Vec<f64> = scored.iter().map(|s| s.score).collect();
    auroc(&scores, labels)
}

/// Order used to select predictions: score descending, then the sorted
/// vertex list ascending.
pub fn prediction_order(scores: &[f64], edges: &[Vec<VertexId>]) -> Vec<usize> {
    let canon: Vec<Vec<VertexId>> = edges
        .iter()
        .map(|e| {
            let mut c = e.clone();
            c.sort_unstable();
            c
        })
        .collect();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| match scores[b].total_cmp(&scores[a]) {
        Ordering::Equal => canon[a].cmp(&canon[b]),
        o => o,
    });
    order
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffMetrics {
    pub true_positives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall and F1 of the top-`cutoff` candidates.
pub fn cutoff_metrics(scores: &[f64], labels: &[bool], edges: &[Vec<VertexId>], cutoff: usize) -> Result<CutoffMetrics> {
    assert_eq!(scores.len(), labels.len());
    assert_eq!(scores.len(), edges.len());
    if cutoff == 0 || cutoff > scores.len() {
        return Err(Error::Parameter(format!(
            "cutoff {cutoff} outside 1..={}",
            scores.len()
        )));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 {
        return Err(Error::MetricUndefined("F1 needs at least one positive"));
    }
    let order = prediction_order(scores, edges);
    let tp = order[..cutoff].iter().filter(|&&k| labels[k]).count();
    let precision = tp as f64 / cutoff as f64;
    let recall = tp as f64 / positives as f64;
    // harmonic mean of precision and recall, in a single rounding
    let f1 = 2.0 * tp as f64 / (cutoff + positives) as f64;
    Ok(CutoffMetrics {
        true_positives: tp,
        precision,
        recall,
        f1,
    })
}

/// F1 score of the top-`cutoff` predictions.
pub fn f1_at_cutoff(scored: &[ScoredEdge], labels: &[bool], cutoff: usize) -> Result<f64> {
    let scores: Vec<f64> = scored.iter().map(|s| s.score).collect();
    let edges: Vec<Vec<VertexId>> = scored.iter().map(|s| s.edge.clone()).collect();
    Ok(cutoff_metrics(&scores, labels, &edges, cutoff)?.f1)
}
