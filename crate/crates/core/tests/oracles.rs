//! Sparse construction paths checked against dense brute-force oracles.

use hyperwalk::localwalk::{walk_matrix_rows, walk_rows_multi, DEFAULT_DROP_TOLERANCE};
use hyperwalk::projection::{adjacency, transition, weighted_projection};
use hyperwalk::synth;
use hyperwalk::Hypergraph;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Dense = Vec<Vec<f64>>;

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k] == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Dense incidence matrix H (n × m).
fn incidence(g: &Hypergraph) -> Dense {
    let mut h = vec![vec![0.0; g.num_edges()]; g.num_vertices()];
    for (e, edge) in g.edges().iter().enumerate() {
        for &v in edge {
            h[v as usize][e] = 1.0;
        }
    }
    h
}

/// `P` from the entrywise definition
/// `p_ij = (1/d_i) Σ_e h_ie h_je / (|e| − 1)` for `i ≠ j`.
fn transition_by_definition(g: &Hypergraph) -> Dense {
    let h = incidence(g);
    let n = g.num_vertices();
    let card: Vec<f64> = (0..g.num_edges()).map(|e| (0..n).map(|i| h[i][e]).sum()).collect();
    let mut p = vec![vec![0.0; n]; n];
    for i in 0..n {
        let d: f64 = h[i].iter().sum();
        for j in 0..n {
            if i == j {
                continue;
            }
            let s: f64 = (0..g.num_edges()).map(|e| h[i][e] * h[j][e] / (card[e] - 1.0)).sum();
            p[i][j] = s / d;
        }
    }
    p
}

/// `(1/K) Σ_{k=1..K} Pᵏ` by dense matrix powers.
fn superposed_dense(p: &Dense, k: usize) -> Dense {
    let n = p.len();
    let mut power = p.clone();
    let mut sum = p.clone();
    for _ in 1..k {
        power = matmul(&power, p);
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += power[i][j];
            }
        }
    }
    sum.iter()
        .map(|r| r.iter().map(|v| v / k as f64).collect())
        .collect()
}

fn small_graph(seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    synth::mixed(&mut rng, 12, 9, 5).unwrap().largest_component()
}

#[test]
fn toy_superposed_row_matches_dense_powers() {
    let g = Hypergraph::from_edges([vec![1, 2, 3], vec![3, 4]]).unwrap();
    let p = transition(&g).unwrap();
    let dense = superposed_dense(&transition_by_definition(&g), 2);
    let expect = [3.0 / 16.0, 5.0 / 16.0, 3.0 / 8.0, 1.0 / 8.0];
    for j in 0..4 {
        assert!((dense[0][j] - expect[j]).abs() < 1e-12);
    }
    let rows = walk_matrix_rows(&p, &[0], 2).unwrap();
    for (j, &want) in expect.iter().enumerate() {
        assert!((rows[&0].get(j as u32) - want).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transition_two_routes_agree(seed in any::<u64>()) {
        let g = small_graph(seed);
        let p = transition(&g).unwrap().to_dense();
        let oracle = transition_by_definition(&g);
        for i in 0..g.num_vertices() {
            for j in 0..g.num_vertices() {
                prop_assert!((p[i][j] - oracle[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn adjacency_is_h_ht_minus_degrees(seed in any::<u64>()) {
        let g = small_graph(seed);
        let h = incidence(&g);
        let ht: Dense = (0..g.num_edges()).map(|e| h.iter().map(|r| r[e]).collect()).collect();
        let hht = matmul(&h, &ht);
        let a = adjacency(&g).to_dense();
        for i in 0..g.num_vertices() {
            for j in 0..g.num_vertices() {
                let want = if i == j { 0.0 } else { hht[i][j] };
                prop_assert_eq!(a[i][j], want);
            }
        }
    }

    #[test]
    fn projections_are_symmetric_with_shared_pattern(seed in any::<u64>()) {
        let g = small_graph(seed);
        let a = adjacency(&g);
        let w = weighted_projection(&g);
        prop_assert!(a.asymmetry() <= 1e-12);
        prop_assert!(w.asymmetry() <= 1e-12);
        prop_assert!(a.same_pattern(&w));
        for i in 0..g.num_vertices() {
            prop_assert_eq!(w.get(i, i), 0.0);
        }
        for (s, d) in w.row_sums().iter().zip(g.degrees()) {
            prop_assert!((s - d as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn sparse_walk_rows_match_dense_powers(seed in any::<u64>()) {
        let g = small_graph(seed);
        let n = g.num_vertices();
        let p = transition(&g).unwrap();
        let dense_p = transition_by_definition(&g);
        let all: Vec<u32> = (0..n as u32).collect();
        let rows = walk_rows_multi(&p, &all, &[1, 2, 3, 4, 5], DEFAULT_DROP_TOLERANCE).unwrap();
        for k in 1..=5 {
            let oracle = superposed_dense(&dense_p, k);
            for i in 0..n {
                let row = &rows[&k][&(i as u32)];
                prop_assert!((row.total() - 1.0).abs() < 1e-10);
                for j in 0..n {
                    prop_assert!((row.get(j as u32) - oracle[i][j]).abs() < 1e-10, "k={} i={} j={}", k, i, j);
                }
            }
        }
    }

    #[test]
    fn support_grows_with_k(seed in any::<u64>()) {
        let g = small_graph(seed);
        let p = transition(&g).unwrap();
        let all: Vec<u32> = (0..g.num_vertices() as u32).collect();
        let rows = walk_rows_multi(&p, &all, &[1, 2, 3, 4, 5], DEFAULT_DROP_TOLERANCE).unwrap();
        for k in 2..=5 {
            for v in &all {
                let prev = &rows[&(k - 1)][v];
                let cur = &rows[&k][v];
                prop_assert!(prev.indices().iter().all(|i| cur.get(*i) > 0.0));
            }
        }
    }

    #[test]
    fn support_within_k_hops(seed in any::<u64>(), k in 1usize..5) {
        let g = small_graph(seed);
        let p = transition(&g).unwrap();
        let rows = walk_matrix_rows(&p, &[0], k).unwrap();
        // breadth-first layers in the clique expansion
        let mut reach = vec![false; g.num_vertices()];
        let mut frontier = vec![0u32];
        for _ in 0..k {
            let mut next = Vec::new();
            for v in frontier {
                for u in g.neighbors(v) {
                    if !reach[u as usize] {
                        reach[u as usize] = true;
                        next.push(u);
                    }
                }
            }
            frontier = next;
        }
        for &i in rows[&0].indices() {
            prop_assert!(reach[i as usize]);
        }
    }
}

#[test]
fn long_walks_converge_to_degree_distribution() {
    // hyperedges of size three make the clique expansion non-bipartite
    let g = synth::uniform(15, 12, 3, 4).unwrap().largest_component();
    let n = g.num_vertices();
    let p = transition_by_definition(&g);
    let mut power = p.clone();
    for _ in 1..64 {
        power = matmul(&power, &p);
    }
    let degrees = g.degrees();
    let total: usize = degrees.iter().sum();
    for i in 0..n {
        for j in 0..n {
            let stationary = degrees[j] as f64 / total as f64;
            assert!((power[i][j] - stationary).abs() < 1e-6, "({i},{j})");
        }
    }
}
