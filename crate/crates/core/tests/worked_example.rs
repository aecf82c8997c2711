mod oracle;

use std::collections::BTreeSet;

use childnet_core::annotation::{
    AnnotatedDocument, AnnotatedUtterance, AnnotationDecision, RejectReason, Structure,
};
use childnet_core::graph::{adjacency, build_graph, components, giant_component};
use childnet_core::ingest::{
    extract_child_utterances, normalize, parse_chat, ExtractOptions, TokenKind,
};
use childnet_core::metrics::{self, avg_structure_size, compute_report, MetricsConfig};
use childnet_core::projection::{parse_bracketed, project};
use childnet_core::{DependencyArc, Ordno};

const PETER7: &str = include_str!("data/peter7.cha");

fn annotate(u: &mut AnnotatedUtterance, brackets: &[&str]) {
    for b in brackets {
        let tree = parse_bracketed(b, &u.tokens).unwrap();
        let leaves = tree.root.leaves();
        u.structures
            .push(project(&tree).unwrap().into_structure(leaves));
    }
}

fn peter7_document() -> AnnotatedDocument {
    let t = parse_chat(PETER7);
    let utts = extract_child_utterances(&t, &ExtractOptions::default());
    let mut doc = AnnotatedDocument::new("peter07");
    for u in &utts {
        doc.utterances.push(AnnotatedUtterance::new(normalize(u)));
    }
    annotate(
        &mut doc.utterances[0],
        &["[telephone ^[^!go [right ^there]]]"],
    );
    annotate(
        &mut doc.utterances[1],
        &["[^!need@2 it@3]", "[my ^[^!need@5 it@6]]"],
    );
    for i in [2, 3, 4] {
        doc.utterances[i].decision = AnnotationDecision::rejected(RejectReason::Untranscribed);
    }
    annotate(&mut doc.utterances[5], &["[^!put [^in there]]"]);
    doc
}

fn set(words: &[&str]) -> BTreeSet<String> {
    words.iter().map(|w| w.to_string()).collect()
}

#[test]
fn extraction_yields_the_six_child_lines() {
    let t = parse_chat(PETER7);
    let got: Vec<String> = extract_child_utterances(&t, &ExtractOptions::default())
        .iter()
        .map(|u| u.text())
        .collect();
    assert_eq!(
        got,
        [
            "xxx telephone go right there",
            "xxx need it my need it xxx",
            "xxx",
            "0",
            "xxx",
            "put in there",
        ]
    );
}

#[test]
fn token_kinds_of_first_line() {
    let t = parse_chat(PETER7);
    let utts = extract_child_utterances(&t, &ExtractOptions::default());
    let kinds: Vec<TokenKind> = normalize(&utts[0]).iter().map(|t| t.kind).collect();
    assert_eq!(
        kinds,
        [
            TokenKind::Untranscribed,
            TokenKind::Word,
            TokenKind::Word,
            TokenKind::Word,
            TokenKind::Word
        ]
    );
    assert_eq!(normalize(&utts[3])[0].kind, TokenKind::NullMarker);
}

#[test]
fn annotation_is_valid() {
    let doc = peter7_document();
    assert!(doc.validate().is_empty(), "{:?}", doc.validate());
}

#[test]
fn words_and_edges() {
    let g = build_graph([&peter7_document()]);
    assert!(g.directed);
    assert_eq!(
        g.nodes,
        set(&[
            "telephone",
            "go",
            "right",
            "there",
            "it",
            "need",
            "my",
            "in",
            "put"
        ])
    );
    let expected: BTreeSet<(String, String)> = [
        ("telephone", "go"),
        ("right", "there"),
        ("there", "go"),
        ("it", "need"),
        ("my", "need"),
        ("there", "in"),
        ("in", "put"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    assert_eq!(g.edges, expected);
}

#[test]
fn mean_structure_size_is_three() {
    let stats = avg_structure_size([&peter7_document()]);
    assert_eq!(stats.count, 4);
    assert_eq!(stats.total_size, 12);
    assert_eq!(stats.mean(), Some(3.0));
}

#[test]
fn giant_component_matches_union_find() {
    let g = build_graph([&peter7_document()]);
    let comps = components(&g);
    assert_eq!(comps.len(), 2);
    assert_eq!(
        comps[0].members,
        set(&["telephone", "go", "right", "there", "in", "put"])
    );
    assert_eq!(comps[1].members, set(&["it", "need", "my"]));

    let m = adjacency(&g, false);
    let a: oracle::Matrix = m.rows().map(|r| r.to_vec()).collect();
    let names: Vec<&String> = g.nodes.iter().collect();
    let oc = oracle::components(&a);
    let sizes: Vec<usize> = oc.iter().map(|c| c.len()).collect();
    assert_eq!(sizes, [6, 3]);
    let first: BTreeSet<String> = oc[0].iter().map(|&i| names[i].clone()).collect();
    assert_eq!(first, comps[0].members);
}

#[test]
fn metrics_on_the_example() {
    let doc = peter7_document();
    let r = compute_report(
        "peter07",
        None,
        std::slice::from_ref(&doc),
        &MetricsConfig::default(),
    );
    assert_eq!(r.n_words, 9);
    assert_eq!(r.gcc_size, 6);
    assert_eq!(r.gcc_edges, 5);
    assert_eq!(r.avg_degree, Some(10.0 / 6.0));
    assert_eq!(r.clustering, Some(0.0));
    assert_eq!(r.avg_structure_size, Some(3.0));
    assert_eq!(r.structure_count, 4);

    let gcc = giant_component(&build_graph([&doc]));
    let a: oracle::Matrix = adjacency(&gcc, false).rows().map(|r| r.to_vec()).collect();
    let l = oracle::path_length(&a).unwrap();
    let rho = oracle::assortativity(&a).unwrap();
    assert!((r.path_length.unwrap() - l).abs() < 1e-12);
    assert!((r.assortativity.unwrap() - rho).abs() < 1e-12);
    let d = metrics::poisson_baseline(6, 10.0 / 6.0, 100.0 / 36.0).unwrap();
    assert!((r.poisson_d.unwrap() - d).abs() < 1e-12);
    // L = 31/15 is within tolerance of D but exceeds N/10
    assert_eq!(r.path_length, Some(31.0 / 15.0));
    assert!(!r.small_world);
}

#[test]
fn look_at_in_that() {
    let tokens = childnet_core::ingest::normalize_words(["Look", "at", "in", "that"]);
    let mut u = AnnotatedUtterance::new(tokens);
    u.structures.push(Structure::from_arcs([
        DependencyArc::new(2, 1),
        DependencyArc::new(4, 2),
    ]));
    u.structures.push(Structure::single(Ordno(3)));
    let mut doc = AnnotatedDocument::new("peter");
    doc.utterances.push(u);
    assert!(doc.is_valid());
    let stats = avg_structure_size([&doc]);
    assert_eq!((stats.total_size, stats.count), (4, 2));
    assert_eq!(stats.mean(), Some(2.0));
}
