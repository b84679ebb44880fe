use hyperwalk::localwalk::walk_matrix_rows;
use hyperwalk::projection::{adjacency, spectral_radius, transition};
use hyperwalk::scoring::{score_lrw_gjs, score_lrw_js, KatzColumns, KatzEval, Method, MethodSpec, Scorer};
use hyperwalk::synth;
use hyperwalk::Hypergraph;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(seed: u64, n: usize) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    synth::mixed(&mut rng, n, n, 5).unwrap()
}

/// Random candidate sets over the vertices of `g`.
fn candidates(g: &Hypergraph, seed: u64, count: usize) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
    let all: Vec<u32> = (0..g.num_vertices() as u32).collect();
    (0..count)
        .map(|i| {
            let size = 2 + i % 4.min(g.num_vertices() - 1);
            all.choose_multiple(&mut rng, size.min(all.len())).copied().collect()
        })
        .collect()
}

fn dense_katz(g: &Hypergraph, beta: f64, terms: usize) -> Vec<Vec<f64>> {
    let a = adjacency(g).to_dense();
    let n = a.len();
    let mut power = a.clone();
    let mut scale = beta;
    let mut sum: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|v| v * beta).collect()).collect();
    for _ in 1..terms {
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    next[i][j] += power[i][k] * a[k][j];
                }
            }
        }
        power = next;
        scale *= beta;
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += scale * power[i][j];
            }
        }
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scores_ignore_vertex_order_within_candidates(seed in any::<u64>()) {
        let g = graph(seed, 14);
        let cands = candidates(&g, seed, 20);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shuffled: Vec<Vec<u32>> = cands
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e.shuffle(&mut rng);
                e
            })
            .collect();
        let scorer = Scorer::new(&g);
        for method in Method::ALL {
            let spec = MethodSpec::new(method).with_k(3);
            prop_assert_eq!(scorer.scores(&spec, &cands).unwrap(), scorer.scores(&spec, &shuffled).unwrap());
        }
    }

    #[test]
    fn pair_candidates_agree_between_js_and_gjs(seed in any::<u64>(), k in 1usize..5) {
        let g = graph(seed, 16);
        let p = transition(&g).unwrap();
        let all: Vec<u32> = (0..g.num_vertices() as u32).collect();
        let rows = walk_matrix_rows(&p, &all, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let e: Vec<u32> = all.choose_multiple(&mut rng, 2).copied().collect();
            let a = score_lrw_js(&e, &rows).unwrap();
            let b = score_lrw_gjs(&e, &rows).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn scores_stay_in_range(seed in any::<u64>()) {
        let g = graph(seed, 14);
        let cands = candidates(&g, seed, 20);
        let scorer = Scorer::new(&g);
        for method in [Method::Lrw, Method::LrwJs, Method::LrwGjs] {
            for s in scorer.scores(&MethodSpec::new(method), &cands).unwrap() {
                prop_assert!((0.0..=2.0).contains(&s));
                if method != Method::Lrw {
                    prop_assert!(s <= 1.0);
                }
            }
        }
    }

    #[test]
    fn truncated_katz_converges_monotonically(seed in any::<u64>()) {
        let g = graph(seed, 12);
        let a = adjacency(&g);
        let all: Vec<u32> = (0..g.num_vertices() as u32).collect();
        let beta = 0.01;
        let closed = KatzColumns::compute(&a, &all, beta, KatzEval::Closed).unwrap();
        let mut prev_gap = f64::INFINITY;
        for terms in 1..=8 {
            let series = KatzColumns::compute(&a, &all, beta, KatzEval::Truncated(terms)).unwrap();
            let dense = dense_katz(&g, beta, terms);
            let mut gap: f64 = 0.0;
            for &i in &all {
                for &j in &all {
                    let s = series.similarity(i, j).unwrap();
                    prop_assert!((s - dense[i as usize][j as usize]).abs() < 1e-12);
                    gap = gap.max((closed.similarity(i, j).unwrap() - s).abs());
                }
            }
            prop_assert!(gap <= prev_gap);
            prev_gap = gap;
        }
        // entries of Aˡ are bounded by ρ(A)ˡ for a symmetric nonnegative A
        let q = beta * spectral_radius(&a);
        prop_assert!(prev_gap <= q.powi(9) / (1.0 - q) + 1e-12);
    }
}

#[test]
fn katz_rejects_divergent_beta() {
    let g = Hypergraph::from_edges([vec![0, 1, 2, 3], vec![3, 4]]).unwrap();
    let scorer = Scorer::new(&g);
    let spec = MethodSpec::new(Method::HKatz).with_beta(0.5).with_katz(KatzEval::Closed);
    assert!(matches!(
        scorer.scores(&spec, &[vec![0, 1]]),
        Err(hyperwalk::Error::KatzDivergence { .. })
    ));
}

#[test]
fn unknown_vertex_is_an_error() {
    let g = Hypergraph::from_edges([vec![0, 1, 2], vec![2, 3]]).unwrap();
    let r = Scorer::new(&g).scores(&MethodSpec::new(Method::Hcn), &[vec![0, 9]]);
    assert!(matches!(r, Err(hyperwalk::Error::UnknownCandidateVertex { .. })));
}
