use hyperwalk::{Hypergraph, LabelMode, LoadOptions};
use proptest::prelude::*;

fn raw_edges() -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0usize..40, 1..6), 1..30)
        .prop_filter("at least one edge of size two", |es| {
            es.iter().any(|e| {
                let mut e = e.clone();
                e.sort_unstable();
                e.dedup();
                e.len() >= 2
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn degree_sum_equals_cardinality_sum(es in raw_edges()) {
        let g = Hypergraph::from_edges(es).unwrap();
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), g.cardinalities().iter().sum::<usize>());
        prop_assert!(g.degrees().iter().all(|&d| d > 0));
    }

    #[test]
    fn save_then_load_is_identity(es in raw_edges()) {
        let g = Hypergraph::from_edges(es).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        g.save(&path).unwrap();
        let back = Hypergraph::load(&path, LoadOptions::default()).unwrap();
        prop_assert_eq!(&back, &g);
        let text = Hypergraph::load(&path, LoadOptions { mode: LabelMode::Label, min_cardinality: 2 }).unwrap();
        prop_assert_eq!(text.num_edges(), g.num_edges());
        prop_assert_eq!(text.num_vertices(), g.num_vertices());
    }

    #[test]
    fn largest_component_is_idempotent_and_connected(es in raw_edges()) {
        let g = Hypergraph::from_edges(es).unwrap();
        let lcc = g.largest_component();
        prop_assert_eq!(&lcc.largest_component(), &lcc);
        prop_assert_eq!(lcc.components().len(), 1);
        let biggest = g.components().iter().map(Vec::len).max().unwrap();
        prop_assert_eq!(lcc.num_vertices(), biggest);
    }

    #[test]
    fn edges_are_canonical(es in raw_edges()) {
        let g = Hypergraph::from_edges(es).unwrap();
        for e in g.edges() {
            prop_assert!(e.len() >= 2);
            prop_assert!(e.windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert!(g.edges().windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = Hypergraph::parse("1,2\n3,x\n", LoadOptions::default()).unwrap_err();
    assert!(matches!(err, hyperwalk::Error::Parse { line: 2, .. }), "{err}");
    assert!(matches!(
        Hypergraph::parse("1\n2\n", LoadOptions::default()),
        Err(hyperwalk::Error::EmptyHypergraph)
    ));
}

#[test]
fn min_cardinality_filters() {
    let opts = LoadOptions {
        mode: LabelMode::Integer,
        min_cardinality: 3,
    };
    let g = Hypergraph::parse("1 2 3\n3 4\n# note\n4,5,6\n", opts).unwrap();
    assert_eq!(g.num_edges(), 2);
    assert_eq!(g.num_vertices(), 6);
}
