use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;

use super::SamplingSpec;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};

pub const MAX_RESAMPLE_ATTEMPTS: usize = 100;

/// `⌊x + ½⌋` with a little slack for values like `0.5 · 3` landing just
/// below the half.
pub fn round_half_up(x: f64) -> usize {
    (x + 0.5 + 1e-9).floor().max(0.0) as usize
}

/// Number of vertices replaced when forging a fake from an edge of size
/// `card`: `(1 − α)·|e|` rounded half up, clamped to `[1, |e| − 1]`.
pub fn replaced_count(alpha: f64, card: usize) -> usize {
    round_half_up((1.0 - alpha) * card as f64).clamp(1, card.saturating_sub(1).max(1))
}

/// Forges fake hyperedges for missing ones.
///
/// Replacement vertices are drawn from vertices with at least one observed
/// hyperedge. Fakes equal (as sets) to any real hyperedge or to an earlier
/// fake are redrawn up to [`MAX_RESAMPLE_ATTEMPTS`] times, after which the
/// last draw is kept and counted as a collision.
pub struct NegativeSampler {
    eligible: Vec<VertexId>,
    is_eligible: Vec<bool>,
    taken: HashSet<Vec<VertexId>>,
    spec: SamplingSpec,
    collisions: usize,
}

impl NegativeSampler {
    /// `observed_degrees[v]` is the degree of `v` within the observed edges.
    pub fn new(g: &Hypergraph, observed_degrees: &[usize], spec: SamplingSpec) -> Result<Self> {
        spec.validate()?;
        let is_eligible: Vec<bool> = observed_degrees.iter().map(|&d| d > 0).collect();
        let eligible = (0..g.num_vertices() as VertexId)
            .filter(|&v| is_eligible[v as usize])
            .collect();
        Ok(Self {
            eligible,
            is_eligible,
            taken: g.edges().iter().cloned().collect(),
            spec,
            collisions: 0,
        })
    }

    /// Fakes accepted despite colliding after the resample budget ran out.
    pub fn collisions(&self) -> usize {
        self.collisions
    }

    fn forge<R: Rng + ?Sized>(&self, edge: &[VertexId], r: usize, rng: &mut R) -> Vec<VertexId> {
        let mut fake = edge.to_vec();
        let positions = index::sample(rng, edge.len(), r);
        let mut chosen: Vec<VertexId> = Vec::with_capacity(r);
        while chosen.len() < r {
            let v = self.eligible[rng.gen_range(0..self.eligible.len())];
            if !edge.contains(&v) && !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        for (pos, v) in positions.iter().zip(chosen) {
            fake[pos] = v;
        }
        fake.sort_unstable();
        fake
    }

    /// Draws `λ` fakes for `edge`.
    pub fn sample<R: Rng + ?Sized>(&mut self, edge: &[VertexId], rng: &mut R) -> Result<Vec<Vec<VertexId>>> {
        if edge.len() < 2 {
            return Err(Error::Sampling(format!("edge {edge:?} has fewer than two vertices")));
        }
        let r = replaced_count(self.spec.alpha, edge.len());
        let inside = edge.iter().filter(|&&v| self.is_eligible[v as usize]).count();
        let available = self.eligible.len() - inside;
        if available < r {
            return Err(Error::Sampling(format!(
                "edge {edge:?} needs {r} replacement vertices but only {available} are eligible"
            )));
        }
        let mut out = Vec::with_capacity(self.spec.lambda);
        for _ in 0..self.spec.lambda {
            let mut fake = self.forge(edge, r, rng);
            let mut attempts = 1;
            while self.taken.contains(&fake) && attempts < MAX_RESAMPLE_ATTEMPTS {
                fake = self.forge(edge, r, rng);
                attempts += 1;
            }
            if self.taken.contains(&fake) {
                self.collisions += 1;
                log::warn!("fake for {edge:?} still collides after {MAX_RESAMPLE_ATTEMPTS} draws; keeping it");
            }
            self.taken.insert(fake.clone());
            out.push(fake);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::rng_from;

    #[test]
    fn replacement_counts() {
        assert_eq!(replaced_count(0.2, 3), 2);
        assert_eq!(replaced_count(0.8, 2), 1);
        assert_eq!(replaced_count(0.5, 3), 2);
        assert_eq!(replaced_count(0.5, 5), 3);
        assert_eq!(replaced_count(0.2, 2), 1);
        assert_eq!(replaced_count(0.8, 5), 1);
        assert_eq!(replaced_count(0.2, 10), 8);
        assert_eq!(round_half_up(2.4), 2);
        assert_eq!(round_half_up(2.5), 3);
    }

    fn graph() -> Hypergraph {
        Hypergraph::from_edges((0..30).map(|i| vec![i, (i + 1) % 30, (i + 7) % 30])).unwrap()
    }

    #[test]
    fn fakes_keep_the_right_number_of_vertices() {
        let g = graph();
        let deg = g.degrees();
        for alpha in [0.2, 0.5, 0.8] {
            let spec = SamplingSpec { alpha, lambda: 3 };
            let mut s = NegativeSampler::new(&g, &deg, spec).unwrap();
            let mut rng = rng_from(5);
            let e = g.edge(4).to_vec();
            let fakes = s.sample(&e, &mut rng).unwrap();
            assert_eq!(fakes.len(), 3);
            let r = replaced_count(alpha, e.len());
            for f in &fakes {
                assert_eq!(f.len(), e.len());
                assert!(f.windows(2).all(|w| w[0] < w[1]));
                let kept = f.iter().filter(|v| e.contains(v)).count();
                assert_eq!(kept, e.len() - r);
                assert!(!g.contains_edge(f));
            }
            let distinct: HashSet<_> = fakes.iter().collect();
            assert_eq!(distinct.len(), 3);
        }
    }

    #[test]
    fn only_observed_vertices_used() {
        let g = graph();
        let mut deg = g.degrees();
        for v in 10..30 {
            deg[v] = 0;
        }
        let mut s = NegativeSampler::new(&g, &deg, SamplingSpec { alpha: 0.2, lambda: 10 }).unwrap();
        let mut rng = rng_from(1);
        for f in s.sample(&[0, 1, 7], &mut rng).unwrap() {
            assert!(f.iter().all(|&v| v < 10));
        }
    }

    #[test]
    fn too_few_eligible_vertices() {
        let g = graph();
        let mut deg = vec![0; g.num_vertices()];
        deg[0] = 1;
        deg[1] = 1;
        deg[7] = 1;
        let mut s = NegativeSampler::new(&g, &deg, SamplingSpec { alpha: 0.2, lambda: 1 }).unwrap();
        assert!(matches!(s.sample(&[0, 1, 7], &mut rng_from(0)), Err(Error::Sampling(_))));
    }

    #[test]
    fn collisions_are_accepted_and_counted() {
        // only one possible fake exists: {0, 2}
        let g = Hypergraph::from_edges([vec![0, 1], vec![1, 2]]).unwrap();
        let mut s = NegativeSampler::new(&g, &g.degrees(), SamplingSpec { alpha: 0.5, lambda: 2 }).unwrap();
        let fakes = s.sample(&[0, 1], &mut rng_from(2)).unwrap();
        assert_eq!(fakes.len(), 2);
        assert!(s.collisions() >= 1);
    }
}
