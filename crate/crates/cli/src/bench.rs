//! Timing of the walk-based scores on synthetic hypergraphs.
//!
//! For each walk length `K` and target clique-expansion degree `d`, a
//! uniform hypergraph is generated and each phase is timed: building walk
//! rows for a fixed set of source vertices, and scoring a fixed candidate
//! set with LRW, pairwise JS and generalized JS. The S-row cost is then
//! regressed on `d` in log-log space, one slope per `K`.

use std::time::{Duration, Instant};

use hyperwalk::localwalk::{walk_rows_multi, DEFAULT_DROP_TOLERANCE};
use hyperwalk::scoring::{score_lrw, score_lrw_gjs, score_lrw_js, Method, MethodSpec, Scorer};
use hyperwalk::{experiment::rng_from, synth, Hypergraph, VertexId};
use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub vertices: usize,
    pub cardinality: usize,
    /// Walk lengths, each with the degrees to sweep.
    pub grid: Vec<(usize, Vec<f64>)>,
    /// Number of source vertices for the S-row phase.
    pub sources: usize,
    pub candidates: usize,
    pub candidate_size: usize,
    pub reps: usize,
    pub seed: u64,
}

impl Default for BenchSpec {
    fn default() -> Self {
        Self {
            vertices: 100_000,
            cardinality: 3,
            grid: (1..=3).map(|k| (k, default_degrees(k))).collect(),
            sources: 20_000,
            candidates: 5_000,
            candidate_size: 4,
            reps: 3,
            seed: 1,
        }
    }
}

/// Degrees swept when only a list of `K` is given.
pub fn default_degrees(k: usize) -> Vec<f64> {
    match k {
        1 => vec![32.0, 64.0, 128.0],
        2 => vec![8.0, 16.0, 32.0],
        _ => vec![4.0, 8.0, 16.0],
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseTiming {
    pub phase: &'static str,
    pub k: usize,
    pub d_target: f64,
    pub d_measured: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Slope {
    pub k: usize,
    pub slope: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub timings: Vec<PhaseTiming>,
    pub slopes: Vec<Slope>,
    /// End-to-end scoring time of the same candidates at the largest
    /// swept degree of the first `K ≥ 2` (or the last entry).
    pub lrw_total: f64,
    pub lrw_gjs_total: f64,
}

/// Shortest per-call time over `reps` rounds; each round repeats `f` until
/// at least 20 ms have elapsed.
fn measure(reps: usize, mut f: impl FnMut()) -> f64 {
    let floor = Duration::from_millis(20);
    let mut best = f64::INFINITY;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let mut calls = 0u32;
        while start.elapsed() < floor || calls == 0 {
            f();
            calls += 1;
        }
        best = best.min(start.elapsed().as_secs_f64() / calls as f64);
    }
    best
}

/// Ordinary least-squares slope of `ln y` on `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn random_sets(g: &Hypergraph, count: usize, size: usize, seed: u64) -> Vec<Vec<VertexId>> {
    let mut rng = rng_from(seed);
    let n = g.num_vertices();
    (0..count)
        .map(|_| index::sample(&mut rng, n, size.min(n)).into_iter().map(|v| v as VertexId).collect())
        .collect()
}

pub fn run(spec: &BenchSpec) -> Result<BenchReport> {
    let mut timings = Vec::new();
    let mut slopes = Vec::new();
    let mut totals: Option<(f64, f64)> = None;
    let comparison_k = spec.grid.iter().map(|(k, _)| *k).find(|&k| k >= 2).or(spec.grid.last().map(|(k, _)| *k));

    for (k, degrees) in &spec.grid {
        let k = *k;
        let mut points = Vec::new();
        for (di, &d) in degrees.iter().enumerate() {
            let g = synth::with_clique_degree(spec.vertices, d, spec.cardinality, spec.seed.wrapping_add(di as u64))?;
            let d_measured = synth::clique_degree(&g);
            let scorer = Scorer::new(&g);
            let p = scorer.transition()?;

            let mut src_rng = rng_from(spec.seed ^ 0x5eed);
            let sources: Vec<VertexId> = index::sample(&mut src_rng, g.num_vertices(), spec.sources.min(g.num_vertices()))
                .into_iter()
                .map(|v| v as VertexId)
                .collect();
            let rows_time = measure(spec.reps, || {
                let rows = walk_rows_multi(p, &sources, &[k], DEFAULT_DROP_TOLERANCE).expect("valid sources");
                std::hint::black_box(rows);
            });
            points.push((d_measured, rows_time));

            let cands = random_sets(&g, spec.candidates, spec.candidate_size, spec.seed);
            let rows = scorer.walk_rows(&cands, &[k])?.remove(&k).unwrap_or_default();
            let lrw = measure(spec.reps, || {
                let s: Vec<f64> = cands.par_iter().map(|e| score_lrw(e, &rows).unwrap()).collect();
                std::hint::black_box(s);
            });
            let pair_js = measure(spec.reps, || {
                let s: Vec<f64> = cands.par_iter().map(|e| score_lrw_js(e, &rows).unwrap()).collect();
                std::hint::black_box(s);
            });
            let gjs = measure(spec.reps, || {
                let s: Vec<f64> = cands.par_iter().map(|e| score_lrw_gjs(e, &rows).unwrap()).collect();
                std::hint::black_box(s);
            });
            for (phase, seconds) in [("s_rows", rows_time), ("lrw", lrw), ("pairwise_js", pair_js), ("generalized_js", gjs)] {
                timings.push(PhaseTiming {
                    phase,
                    k,
                    d_target: d,
                    d_measured,
                    seconds,
                });
            }

            if Some(k) == comparison_k && di + 1 == degrees.len() {
                let end_to_end = |method: Method| {
                    measure(spec.reps, || {
                        let s = Scorer::new(&g)
                            .scores(&MethodSpec::new(method).with_k(k), &cands)
                            .expect("bench candidates are valid");
                        std::hint::black_box(s);
                    })
                };
                totals = Some((end_to_end(Method::Lrw), end_to_end(Method::LrwGjs)));
            }
        }
        if points.len() >= 2 {
            slopes.push(Slope {
                k,
                slope: log_log_slope(&points),
            });
        }
    }
    let (lrw_total, lrw_gjs_total) = totals.unwrap_or((f64::NAN, f64::NAN));
    Ok(BenchReport {
        timings,
        slopes,
        lrw_total,
        lrw_gjs_total,
    })
}

pub const BENCH_CSV_HEADER: [&str; 5] = ["phase", "k", "d_target", "d_measured", "seconds"];

pub fn csv_rows(report: &BenchReport) -> Vec<Vec<String>> {
    report
        .timings
        .iter()
        .map(|t| {
            vec![
                t.phase.to_string(),
                t.k.to_string(),
                t.d_target.to_string(),
                t.d_measured.to_string(),
                t.seconds.to_string(),
            ]
        })
        .collect()
}

pub fn render(report: &BenchReport) -> String {
    let mut out = format!(
        "{:<16} {:>3} {:>8} {:>10} {:>12}\n",
        "phase", "K", "d", "d_measured", "seconds"
    );
    for t in &report.timings {
        out.push_str(&format!(
            "{:<16} {:>3} {:>8} {:>10.2} {:>12.6}\n",
            t.phase, t.k, t.d_target, t.d_measured, t.seconds
        ));
    }
    out.push('\n');
    for s in &report.slopes {
        out.push_str(&format!("S-row log-log slope vs d, K={}: {:.3}\n", s.k, s.slope));
    }
    out.push_str(&format!(
        "end-to-end scoring: LRW {:.4}s, LRW-GJS {:.4}s\n",
        report.lrw_total, report.lrw_gjs_total
    ));
    out
}
