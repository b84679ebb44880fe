use rand::seq::SliceRandom;

use super::{derive_seed, rng_from, SplitSpec, Stream};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const MAX_SPLIT_ATTEMPTS: usize = 100;

/// Observed/missing partition of a hypergraph's edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    /// Sorted ids of observed hyperedges (`E^o`).
    pub observed: Vec<usize>,
    /// Sorted ids of missing hyperedges kept after pruning (`E^m`).
    pub missing: Vec<usize>,
    /// Missing hyperedges dropped because they touch a vertex absent from `E^o`.
    pub pruned: usize,
    pub seed: u64,
    pub attempt: usize,
}

/// `⌈ρ·m⌉`, guarded against floating noise just above an integer.
pub fn observed_count(rho: f64, m: usize) -> usize {
    ((rho * m as f64) - 1e-9).ceil().max(0.0) as usize
}

/// Per-vertex degree counted over the given edges only.
pub fn degrees_within(g: &Hypergraph, edge_ids: &[usize]) -> Vec<usize> {
    let mut deg = vec![0; g.num_vertices()];
    for &e in edge_ids {
        for &v in g.edge(e) {
            deg[v as usize] += 1;
        }
    }
    deg
}

/// Randomly partitions the hyperedges into `⌈ρ·m⌉` observed and the rest
/// missing, then drops missing edges that contain a vertex with no observed
/// hyperedge. A split whose pruned missing set is empty is redrawn with the
/// next derived seed.
pub fn split(g: &Hypergraph, spec: &SplitSpec, trial: usize) -> Result<Split> {
    spec.validate()?;
    let m = g.num_edges();
    let n_obs = observed_count(spec.observed_fraction, m);
    for attempt in 0..MAX_SPLIT_ATTEMPTS {
        let seed = derive_seed(spec.seed, &[Stream::Split as u64, trial as u64, attempt as u64]);
        let mut rng = rng_from(seed);
        let mut ids: Vec<usize> = (0..m).collect();
        ids.shuffle(&mut rng);
        let (obs, miss) = ids.split_at(n_obs.min(m));
        let mut observed = obs.to_vec();
        observed.sort_unstable();
        let deg = degrees_within(g, &observed);
        let mut missing: Vec<usize> = miss
            .iter()
            .copied()
            .filter(|&e| g.edge(e).iter().all(|&v| deg[v as usize] > 0))
            .collect();
        missing.sort_unstable();
        let pruned = miss.len() - missing.len();
        if !missing.is_empty() {
            return Ok(Split {
                observed,
                missing,
                pruned,
                seed,
                attempt,
            });
        }
        log::debug!("trial {trial}: split attempt {attempt} left no missing edge");
    }
    Err(Error::DegenerateTrial {
        trial,
        attempts: MAX_SPLIT_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(m: usize) -> Hypergraph {
        // consecutive triples around a ring: every vertex has degree 3
        Hypergraph::from_edges((0..m).map(|i| vec![i, (i + 1) % m, (i + 2) % m])).unwrap()
    }

    fn spec(rho: f64, seed: u64) -> SplitSpec {
        SplitSpec {
            observed_fraction: rho,
            trials: 1,
            seed,
        }
    }

    #[test]
    fn counts_before_pruning() {
        let g = ring(10);
        let s = split(&g, &spec(0.8, 3), 0).unwrap();
        assert_eq!(s.observed.len(), 8);
        assert_eq!(s.missing.len() + s.pruned, 2);
        assert_eq!(observed_count(0.8, 10), 8);
        assert_eq!(observed_count(0.8, 1457), 1166);
        assert_eq!(observed_count(0.5, 3), 2);
    }

    #[test]
    fn same_seed_same_split() {
        let g = ring(30);
        assert_eq!(split(&g, &spec(0.8, 11), 4).unwrap(), split(&g, &spec(0.8, 11), 4).unwrap());
        assert_ne!(split(&g, &spec(0.8, 11), 4).unwrap(), split(&g, &spec(0.8, 11), 5).unwrap());
    }

    #[test]
    fn pruned_edges_touch_unobserved_vertices() {
        // ring plus pendant edges whose outer vertex has degree one
        let g = Hypergraph::from_edges(
            (0..30)
                .map(|i| vec![i, (i + 1) % 30, (i + 2) % 30])
                .chain((0..30).map(|i| vec![i, 100 + i])),
        )
        .unwrap();
        let s = split(&g, &spec(0.5, 1), 0).unwrap();
        let deg = degrees_within(&g, &s.observed);
        for &e in &s.missing {
            assert!(g.edge(e).iter().all(|&v| deg[v as usize] > 0));
        }
        assert!(s.pruned > 0);
        // every leaf vertex has degree one, so no missing edge survives
        let star = Hypergraph::from_edges((0..10).map(|i| vec![i, 100])).unwrap();
        assert!(matches!(split(&star, &spec(0.5, 1), 0), Err(Error::DegenerateTrial { .. })));
    }

    #[test]
    fn invalid_rho_rejected() {
        assert!(split(&ring(5), &spec(1.0, 0), 0).is_err());
        assert!(split(&ring(5), &spec(0.0, 0), 0).is_err());
    }
}
