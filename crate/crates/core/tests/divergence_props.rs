use hyperwalk::divergence::{js, js_generalized, Weights};
use hyperwalk::WalkDistribution;
use proptest::prelude::*;

/// Dense JS evaluated straight from the definition with natural logs.
fn js_dense(p: &[f64], q: &[f64]) -> f64 {
    let mut total = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let r = (a + b) / 2.0;
        if a > 0.0 {
            total += 0.5 * a * (a / r).ln();
        }
        if b > 0.0 {
            total += 0.5 * b * (b / r).ln();
        }
    }
    total / std::f64::consts::LN_2
}

fn gjs_dense(ps: &[Vec<f64>], w: &[f64]) -> f64 {
    let n = ps[0].len();
    let mut total = 0.0;
    for x in 0..n {
        let r: f64 = ps.iter().zip(w).map(|(p, wi)| wi * p[x]).sum();
        for (p, wi) in ps.iter().zip(w) {
            if p[x] > 0.0 {
                total += wi * p[x] * (p[x] / r).ln();
            }
        }
    }
    total / std::f64::consts::LN_2
}

/// Random distribution over `n` points with roughly half the mass zero.
fn distribution(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.0], n).prop_filter_map("nonzero mass", |v| {
        let s: f64 = v.iter().sum();
        (s > 0.0).then(|| v.iter().map(|x| x / s).collect())
    })
}

fn dist(p: &[f64]) -> WalkDistribution {
    WalkDistribution::from_dense(0, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn js_bounded_symmetric_and_matches_dense((p, q) in (2usize..20).prop_flat_map(|n| (distribution(n), distribution(n)))) {
        let (dp, dq) = (dist(&p), dist(&q));
        let v = js(&dp, &dq);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
        prop_assert_eq!(v, js(&dq, &dp));
        prop_assert!((v - js_dense(&p, &q)).abs() < 1e-12);
        let g = js_generalized(&[&dp, &dq], &Weights::uniform(2)).unwrap();
        prop_assert!((g - v).abs() < 1e-12);
    }

    #[test]
    fn generalized_bounded_and_matches_dense(ps in (2usize..10, 2usize..8).prop_flat_map(|(n, t)| prop::collection::vec(distribution(n), t))) {
        let t = ps.len();
        let ds: Vec<WalkDistribution> = ps.iter().map(|p| dist(p)).collect();
        let refs: Vec<&WalkDistribution> = ds.iter().collect();
        let v = js_generalized(&refs, &Weights::uniform(t)).unwrap();
        prop_assert!(v >= -1e-12 && v <= (t as f64).log2() + 1e-12);
        let w = vec![1.0 / t as f64; t];
        prop_assert!((v - gjs_dense(&ps, &w)).abs() < 1e-12);
    }

    #[test]
    fn generalized_permutation_invariant(
        (ps, raw_w, perm) in (2usize..10, 2usize..7).prop_flat_map(|(n, t)| (
            prop::collection::vec(distribution(n), t),
            prop::collection::vec(0.01f64..1.0, t),
            Just((0..t).collect::<Vec<usize>>()).prop_shuffle(),
        ))
    ) {
        let s: f64 = raw_w.iter().sum();
        let w: Vec<f64> = raw_w.iter().map(|x| x / s).collect();
        let ds: Vec<WalkDistribution> = ps.iter().map(|p| dist(p)).collect();
        let refs: Vec<&WalkDistribution> = ds.iter().collect();
        let base = js_generalized(&refs, &Weights::new(w.clone()).unwrap()).unwrap();
        let prefs: Vec<&WalkDistribution> = perm.iter().map(|&i| &ds[i]).collect();
        let pw: Vec<f64> = perm.iter().map(|&i| w[i]).collect();
        let permuted = js_generalized(&prefs, &Weights::new(pw).unwrap()).unwrap();
        prop_assert!((base - permuted).abs() < 1e-12);
        prop_assert!((base - gjs_dense(&ps, &w)).abs() < 1e-12);
    }
}
