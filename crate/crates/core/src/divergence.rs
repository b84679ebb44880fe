//! Jensen-Shannon divergence (base 2) between sparse distributions.
//!
//! Both routines walk the merged supports only, so the cost is linear in the
//! number of stored entries. `0 · log(0/r)` is taken as 0.

use crate::error::{Error, Result};
use crate::localwalk::WalkDistribution;

/// Mixture weights for [`js_generalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::Parameter("weights must be finite and nonnegative".into()));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self(values))
    }

    pub fn uniform(t: usize) -> Self {
        Self(vec![1.0 / t as f64; t])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Contribution of one coordinate to JS(p‖q); symmetric in its arguments.
fn js_term(a: f64, b: f64) -> f64 {
    let r = 0.5 * (a + b);
    let part = |x: f64| if x > 0.0 { x * (x / r).log2() } else { 0.0 };
    0.5 * (part(a) + part(b))
}

/// Jensen-Shannon divergence in bits, in `[0, 1]`.
///
/// Exactly symmetric: coordinates are visited in index order and each
/// contribution is computed symmetrically.
pub fn js(p: &WalkDistribution, q: &WalkDistribution) -> f64 {
    js_sparse(p.indices(), p.probs(), q.indices(), q.probs())
}

/// [`js`] on raw sorted sparse vectors.
pub fn js_sparse(pi: &[u32], pv: &[f64], qi: &[u32], qv: &[f64]) -> f64 {
    let (mut a, mut b) = (0, 0);
    let mut total = 0.0;
    while a < pi.len() || b < qi.len() {
        let (x, y) = match (pi.get(a), qi.get(b)) {
            (Some(&i), Some(&j)) if i == j => {
                a += 1;
                b += 1;
                (pv[a - 1], qv[b - 1])
            }
            (Some(&i), Some(&j)) if i < j => {
                a += 1;
                (pv[a - 1], 0.0)
            }
            (Some(_), None) => {
                a += 1;
                (pv[a - 1], 0.0)
            }
            _ => {
                b += 1;
                (0.0, qv[b - 1])
            }
        };
        total += js_term(x, y);
    }
    total.clamp(0.0, 1.0)
}

/// Generalized Jensen-Shannon divergence `Σ_i π_i KL(p_i ‖ Σ_j π_j p_j)` in
/// bits, in `[0, log2 t]`.
///
/// Per coordinate the weighted masses are summed in sorted order, so the
/// value is unchanged by any simultaneous permutation of `dists` and
/// `weights`.
pub fn js_generalized(dists: &[&WalkDistribution], weights: &Weights) -> Result<f64> {
    let t = dists.len();
    if t < 2 {
        return Err(Error::Parameter(format!("generalized JS needs t >= 2 distributions, got {t}")));
    }
    if weights.len() != t {
        return Err(Error::Parameter(format!(
            "{} weights for {t} distributions",
            weights.len()
        )));
    }
    // (index, weighted mass, raw mass)
    let mut entries: Vec<(u32, f64, f64)> = Vec::with_capacity(dists.iter().map(|d| d.support_len()).sum());
    for (d, &w) in dists.iter().zip(weights.values()) {
        if w == 0.0 {
            continue;
        }
        entries.extend(d.iter().filter(|&(_, p)| p > 0.0).map(|(i, p)| (i, w * p, p)));
    }
    entries.sort_unstable_by(|x, y| {
        x.0.cmp(&y.0)
            .then(x.1.total_cmp(&y.1))
            .then(x.2.total_cmp(&y.2))
    });
    let mut total = 0.0;
    let mut start = 0;
    while start < entries.len() {
        let idx = entries[start].0;
        let mut end = start;
        while end < entries.len() && entries[end].0 == idx {
            end += 1;
        }
        let group = &entries[start..end];
        let r: f64 = group.iter().map(|e| e.1).sum();
        total += group.iter().map(|&(_, wp, p)| wp * (p / r).log2()).sum::<f64>();
        start = end;
    }
    Ok(total.clamp(0.0, (t as f64).log2()))
}
