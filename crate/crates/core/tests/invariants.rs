use std::collections::BTreeSet;

use childnet_core::annotation::{
    AnnotatedDocument, AnnotatedUtterance, DependencyArc, Ordno, Structure,
};
use childnet_core::graph::{adjacency, build_graph, components, giant_component, undirected_view};
use childnet_core::ingest::{normalize_words, StripSet, Token};
use childnet_core::metrics::{avg_degree, avg_structure_size, clustering_avg, clustering_local};
use proptest::prelude::*;

const VOCAB: &[&str] = &[
    "put",
    "in",
    "there",
    "need",
    "it",
    "my",
    "go",
    "right",
    "telephone",
    "car",
    "want",
    "fix",
];

/// One utterance: words from a small vocabulary, cut into consecutive
/// segments that each carry a random in-tree.
fn utterance() -> impl Strategy<Value = AnnotatedUtterance> {
    (1usize..=8)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(proptest::sample::select(VOCAB), n),
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<usize>(), n),
            )
        })
        .prop_map(|(words, cuts, picks)| {
            let mut u = AnnotatedUtterance::new(normalize_words(words.iter().copied()));
            let n = words.len();
            let mut start = 0;
            for i in 0..n {
                if i + 1 == n || cuts[i] {
                    let seg: Vec<u32> = (start + 1..=i + 1).map(|p| p as u32).collect();
                    let arcs: Vec<DependencyArc> = (1..seg.len())
                        .map(|k| DependencyArc::new(seg[k], seg[picks[k] % k]))
                        .collect();
                    let mut s = Structure::from_arcs(arcs);
                    s.members.extend(seg.iter().map(|&p| Ordno(p)));
                    u.structures.push(s);
                    start = i + 1;
                }
            }
            u
        })
}

fn document() -> impl Strategy<Value = AnnotatedDocument> {
    proptest::collection::vec(utterance(), 0..12).prop_map(|us| {
        let mut d = AnnotatedDocument::new("c");
        d.utterances = us;
        d
    })
}

proptest! {
    #[test]
    fn generated_documents_are_valid(d in document()) {
        prop_assert!(d.validate().is_empty());
    }

    #[test]
    fn normalization_is_idempotent_and_keeps_order(text in "[A-Za-z0 .,;:!?<>*]{0,40}") {
        let words = StripSet::default().tokenize(&text);
        let toks = normalize_words(words.iter().map(String::as_str));
        prop_assert_eq!(toks.len(), words.len());
        for (t, w) in toks.iter().zip(&words) {
            prop_assert_eq!(&t.surface, w);
            prop_assert_eq!(&Token::new(&t.norm).norm, &t.norm);
        }
    }

    #[test]
    fn graph_ignores_repeated_documents(d in document()) {
        let once = build_graph([&d]);
        let twice = build_graph([&d, &d]);
        prop_assert_eq!(once.nodes, twice.nodes);
        prop_assert_eq!(once.edges, twice.edges);
    }

    #[test]
    fn graph_grows_monotonically(a in document(), b in document()) {
        let ga = build_graph([&a]);
        let gab = build_graph([&a, &b]);
        prop_assert!(ga.nodes.is_subset(&gab.nodes));
        prop_assert!(ga.edges.is_subset(&gab.edges));
    }

    #[test]
    fn components_partition_the_nodes(d in document()) {
        let g = build_graph([&d]);
        let comps = components(&g);
        let mut seen = BTreeSet::new();
        for c in &comps {
            for m in &c.members {
                prop_assert!(seen.insert(m.clone()));
            }
        }
        prop_assert_eq!(seen, g.nodes.clone());
        for w in comps.windows(2) {
            prop_assert!(w[0].len() >= w[1].len());
        }
    }

    #[test]
    fn undirected_adjacency_is_symmetric(d in document()) {
        let g = build_graph([&d]);
        prop_assert!(adjacency(&g, false).is_symmetric());
        let m = adjacency(&g, true);
        for (a, b) in &g.edges {
            let idx = g.index();
            prop_assert_eq!(m.get(idx[a.as_str()], idx[b.as_str()]), 1);
        }
    }

    #[test]
    fn gcc_degree_identity_and_clustering_range(d in document()) {
        let gcc = giant_component(&build_graph([&d]));
        if let Some(k) = avg_degree(&gcc) {
            let lhs = k * gcc.node_count() as f64;
            prop_assert!((lhs - 2.0 * gcc.edge_count() as f64).abs() < 1e-9);
        }
        for w in &gcc.nodes {
            let c = clustering_local(&gcc, w).unwrap();
            prop_assert!((0.0..=1.0).contains(&c));
        }
        if let Some(c) = clustering_avg(&gcc) {
            prop_assert!((0.0..=1.0).contains(&c));
        }
    }

    #[test]
    fn mean_size_ignores_order(mut d in document(), e in document(), seed in any::<u64>()) {
        let before = avg_structure_size([&d, &e]);
        let n = d.utterances.len();
        if n > 1 {
            d.utterances.rotate_left((seed as usize) % n);
        }
        for u in &mut d.utterances {
            u.structures.reverse();
        }
        prop_assert_eq!(avg_structure_size([&e, &d]), before);
    }

    #[test]
    fn directed_and_undirected_share_components(d in document()) {
        let g = build_graph([&d]);
        prop_assert_eq!(components(&g), components(&undirected_view(&g)));
    }
}
