//! End-to-end evaluation protocol.
//!
//! Each trial splits the hyperedges into observed and missing sets, forges
//! `λ` fakes per missing edge, picks each method's hyperparameter by k-fold
//! cross-validation on the observed edges, scores the candidate set on the
//! observed hypergraph and reports AUROC and F1 at cutoff `|E^m|`.
//!
//! All randomness flows from the master seed through [`derive_seed`], so a
//! run is reproducible and independent of how trials are scheduled.

pub mod cv;
pub mod sampling;
pub mod split;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::metrics::{auroc, cutoff_metrics};
use crate::localwalk::DEFAULT_DROP_TOLERANCE;
use crate::scoring::{KatzEval, Method, MethodSpec, Scorer};

pub use cv::{cross_validate, CvOutcome, Param};
pub use sampling::{replaced_count, NegativeSampler};
pub use split::{split, Split};

pub type Rng = ChaCha8Rng;

/// Independent random streams drawn from the master seed.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub(crate) enum Stream {
    Split = 1,
    Negatives = 2,
    Folds = 3,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with a path of stream/trial/attempt tags.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &tag| splitmix64(acc ^ splitmix64(tag)))
}

pub fn rng_from(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    /// Fraction ρ of hyperedges observed.
    pub observed_fraction: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            observed_fraction: 0.8,
            trials: 10,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.observed_fraction > 0.0 && self.observed_fraction < 1.0) {
            return Err(Error::Parameter(format!(
                "observed fraction must lie in (0, 1), got {}",
                self.observed_fraction
            )));
        }
        if self.trials == 0 {
            return Err(Error::Parameter("at least one trial is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingSpec {
    /// Fraction α of a missing edge's vertices kept in each fake.
    pub alpha: f64,
    /// Fakes per missing edge.
    pub lambda: usize,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        Self { alpha: 0.5, lambda: 3 }
    }
}

impl SamplingSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Parameter(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.lambda == 0 {
            return Err(Error::Parameter("lambda must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSpec {
    pub folds: usize,
    pub k_grid: Vec<usize>,
    pub beta_grid: Vec<f64>,
    pub katz: KatzEval,
    /// Walk-row entries below this are dropped after each step.
    #[serde(default = "default_drop_tolerance")]
    pub drop_tolerance: f64,
}

fn default_drop_tolerance() -> f64 {
    DEFAULT_DROP_TOLERANCE
}

impl Default for CvSpec {
    fn default() -> Self {
        Self {
            folds: 5,
            k_grid: vec![2, 3, 4, 5],
            beta_grid: vec![0.001, 0.005, 0.01, 0.05, 0.1],
            katz: KatzEval::Auto,
            drop_tolerance: DEFAULT_DROP_TOLERANCE,
        }
    }
}

impl CvSpec {
    /// Grid searched for `method`, or `None` if it has no hyperparameter.
    pub fn grid(&self, method: Method) -> Option<Vec<Param>> {
        match method {
            m if m.uses_walks() => Some(self.k_grid.iter().map(|&k| Param::K(k)).collect()),
            Method::HKatz => Some(self.beta_grid.iter().map(|&b| Param::Beta(b)).collect()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub split: SplitSpec,
    pub sampling: SamplingSpec,
    pub cv: CvSpec,
    pub methods: Vec<Method>,
}

/// Positive (`E^m`) and fake (`E^f`) candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub positives: Vec<Vec<VertexId>>,
    pub negatives: Vec<Vec<VertexId>>,
}

impl CandidateSet {
    /// All candidates, positives first, with their labels.
    pub fn labelled(&self) -> (Vec<Vec<VertexId>>, Vec<bool>) {
        let mut edges = self.positives.clone();
        edges.extend(self.negatives.iter().cloned());
        let labels = (0..edges.len()).map(|i| i < self.positives.len()).collect();
        (edges, labels)
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodTrial {
    pub method: Method,
    pub auroc: f64,
    pub f1: f64,
    pub param: Option<Param>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub split_seed: u64,
    pub observed: usize,
    pub missing: usize,
    pub pruned_missing: usize,
    /// Connected components of the observed hypergraph.
    pub observed_components: usize,
    pub negatives: usize,
    pub sampling_collisions: usize,
    pub methods: Vec<MethodTrial>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub auroc_mean: f64,
    pub f1_mean: f64,
    /// Most frequently chosen hyperparameter (smallest on ties).
    pub param_mode: Option<Param>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialResult>,
    pub summary: Vec<MethodSummary>,
    pub mean_missing: f64,
}

/// Builds the candidate set of one trial: the pruned missing edges and `λ`
/// fakes for each of them, in missing-edge order.
pub fn build_candidates(
    g: &Hypergraph,
    split: &Split,
    sampling: SamplingSpec,
    seed: u64,
    trial: usize,
) -> Result<(CandidateSet, usize)> {
    let deg = split::degrees_within(g, &split.observed);
    let mut sampler = NegativeSampler::new(g, &deg, sampling)?;
    let mut rng = rng_from(derive_seed(seed, &[Stream::Negatives as u64, trial as u64]));
    let positives: Vec<Vec<VertexId>> = split.missing.iter().map(|&e| g.edge(e).to_vec()).collect();
    let mut negatives = Vec::with_capacity(positives.len() * sampling.lambda);
    for e in &positives {
        negatives.extend(sampler.sample(e, &mut rng)?);
    }
    Ok((CandidateSet { positives, negatives }, sampler.collisions()))
}

/// Cross-validation for one method of one trial; `None` if the method has
/// no hyperparameter.
fn select(
    g: &Hypergraph,
    config: &ExperimentConfig,
    sp: &Split,
    candidates: &[Vec<VertexId>],
    method: Method,
    trial: usize,
) -> Result<Option<CvOutcome>> {
    let Some(grid) = config.cv.grid(method) else {
        return Ok(None);
    };
    let mut rng = rng_from(derive_seed(config.split.seed, &[Stream::Folds as u64, trial as u64]));
    cross_validate(g, method, &sp.observed, candidates, &config.cv, &grid, &mut rng).map(Some)
}

/// The cross-validation that [`run_experiment`] performs in `trial`, for
/// every configured method that has a grid.
pub fn trial_cv(g: &Hypergraph, config: &ExperimentConfig, trial: usize) -> Result<Vec<(Method, CvOutcome)>> {
    let sp = split(g, &config.split, trial)?;
    let (cands, _) = build_candidates(g, &sp, config.sampling, config.split.seed, trial)?;
    let (edges, _) = cands.labelled();
    let mut out = Vec::new();
    for &method in &config.methods {
        if let Some(outcome) = select(g, config, &sp, &edges, method, trial)? {
            out.push((method, outcome));
        }
    }
    Ok(out)
}

fn run_trial(g: &Hypergraph, config: &ExperimentConfig, trial: usize) -> Result<TrialResult> {
    let seed = config.split.seed;
    let sp = split(g, &config.split, trial)?;
    let (cands, collisions) = build_candidates(g, &sp, config.sampling, seed, trial)?;
    let (edges, labels) = cands.labelled();

    let (train, map) = g.with_edge_subset(&sp.observed);
    let local: Vec<Vec<VertexId>> = edges
        .iter()
        .map(|e| {
            e.iter()
                .map(|&v| map[v as usize])
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::UnknownCandidateVertex {
                    edge: g.edge_labels(e),
                })
        })
        .collect::<Result<_>>()?;
    let scorer = Scorer::new(&train).with_drop_tolerance(config.cv.drop_tolerance);

    let mut methods = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let started = Instant::now();
        let param = select(g, config, &sp, &edges, method, trial)?.map(|o| o.chosen);
        let spec = param.map_or(MethodSpec::new(method), |p| p.apply(MethodSpec::new(method)))
            .with_katz(config.cv.katz);
        let scores = scorer.scores(&spec, &local)?;
        let auc = auroc(&scores, &labels)?;
        let f1 = cutoff_metrics(&scores, &labels, &edges, cands.positives.len())?.f1;
        methods.push(MethodTrial {
            method,
            auroc: auc,
            f1,
            param,
            elapsed: started.elapsed(),
        });
    }
    Ok(TrialResult {
        trial,
        split_seed: sp.seed,
        observed: sp.observed.len(),
        missing: sp.missing.len(),
        pruned_missing: sp.pruned,
        observed_components: train.components().len(),
        negatives: cands.negatives.len(),
        sampling_collisions: collisions,
        methods,
    })
}

fn param_mode(params: impl Iterator<Item = Param>) -> Option<Param> {
    let mut counts: Vec<(Param, usize)> = Vec::new();
    for p in params {
        match counts.iter_mut().find(|(q, _)| *q == p) {
            Some((_, c)) => *c += 1,
            None => counts.push((p, 1)),
        }
    }
    counts.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.value().total_cmp(&b.0.value())));
    counts.first().map(|(p, _)| *p)
}

/// Runs every trial (in parallel) and aggregates per-method means.
pub fn run_experiment(g: &Hypergraph, config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.split.validate()?;
    config.sampling.validate()?;
    if config.methods.is_empty() {
        return Err(Error::Parameter("no method selected".into()));
    }
    let outcomes: Vec<Result<TrialResult>> = (0..config.split.trials)
        .into_par_iter()
        .map(|t| run_trial(g, config, t))
        .collect();
    let mut trials = Vec::with_capacity(outcomes.len());
    for (t, outcome) in outcomes.into_iter().enumerate() {
        trials.push(outcome.map_err(|source| Error::Trial {
            trial: t,
            source: Box::new(source),
        })?);
    }

    let n = trials.len() as f64;
    let mut per_method: BTreeMap<usize, Vec<&MethodTrial>> = BTreeMap::new();
    for t in &trials {
        for (i, m) in t.methods.iter().enumerate() {
            per_method.entry(i).or_default().push(m);
        }
    }
    let summary = per_method
        .into_values()
        .map(|runs| MethodSummary {
            method: runs[0].method,
            auroc_mean: runs.iter().map(|r| r.auroc).sum::<f64>() / n,
            f1_mean: runs.iter().map(|r| r.f1).sum::<f64>() / n,
            param_mode: param_mode(runs.iter().filter_map(|r| r.param)),
        })
        .collect();
    let mean_missing = trials.iter().map(|t| t.missing as f64).sum::<f64>() / n;
    Ok(ExperimentResult {
        config: config.clone(),
        trials,
        summary,
        mean_missing,
    })
}

impl ExperimentResult {
    pub fn summary_for(&self, method: Method) -> Option<&MethodSummary> {
        self.summary.iter().find(|s| s.method == method)
    }

    /// Wall-clock time spent per method, summed over trials.
    pub fn elapsed_by_method(&self) -> BTreeMap<Method, Duration> {
        let mut out = BTreeMap::new();
        for t in &self.trials {
            for m in &t.methods {
                *out.entry(m.method).or_insert(Duration::ZERO) += m.elapsed;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ_by_path() {
        let a = derive_seed(7, &[1, 0]);
        assert_eq!(a, derive_seed(7, &[1, 0]));
        assert_ne!(a, derive_seed(7, &[1, 1]));
        assert_ne!(a, derive_seed(8, &[1, 0]));
        assert_ne!(derive_seed(7, &[0, 1]), derive_seed(7, &[1, 0]));
    }

    #[test]
    fn mode_prefers_smaller_on_ties() {
        let ps = [Param::K(3), Param::K(2), Param::K(3), Param::K(2), Param::K(5)];
        assert_eq!(param_mode(ps.into_iter()), Some(Param::K(2)));
        assert_eq!(param_mode([Param::K(4), Param::K(4), Param::K(2)].into_iter()), Some(Param::K(4)));
        assert_eq!(param_mode(std::iter::empty()), None);
    }

    #[test]
    fn spec_validation() {
        assert!(SamplingSpec { alpha: 1.0, lambda: 3 }.validate().is_err());
        assert!(SamplingSpec { alpha: 0.5, lambda: 0 }.validate().is_err());
        assert!(SplitSpec { trials: 0, ..Default::default() }.validate().is_err());
        assert!(SplitSpec::default().validate().is_ok());
    }
}
