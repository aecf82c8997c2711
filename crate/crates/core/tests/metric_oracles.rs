mod oracle;

use std::time::Instant;

use childnet_core::graph::{adjacency, giant_component};
use childnet_core::metrics::{
    assortativity, avg_degree, clustering_avg, clustering_local, path_length, poisson_baseline,
};
use childnet_core::SyntaxGraph;
use rand::Rng;

fn graph(n: usize, edges: &[(String, String)]) -> SyntaxGraph {
    let mut g = SyntaxGraph::new_undirected();
    for i in 0..n {
        g.add_node(&oracle::name(i));
    }
    for (a, b) in edges {
        g.add_edge(a, b);
    }
    g
}

fn close(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs() < 1e-12,
        (None, None) => true,
        _ => false,
    }
}

#[test]
fn two_hundred_random_graphs_match_reference() {
    let start = Instant::now();
    let mut rng = oracle::seeded(0x5eed);
    for case in 0..200 {
        let n = rng.random_range(1..=50);
        let p = rng.random_range(0.02..0.5);
        let edges = oracle::random_edges(&mut rng, n, p);
        let g = graph(n, &edges);
        let full = oracle::matrix(n, &edges);

        // whole graph
        assert!(
            close(avg_degree(&g), oracle::avg_degree(&full)),
            "case {case}: avg_degree"
        );
        assert!(
            close(clustering_avg(&g), oracle::clustering(&full)),
            "case {case}: clustering"
        );
        assert!(
            close(assortativity(&g), oracle::assortativity(&full)),
            "case {case}: rho"
        );
        for i in 0..n {
            let got = clustering_local(&g, &oracle::name(i)).unwrap();
            assert!((got - oracle::local_clustering(&full, i)).abs() < 1e-12);
        }
        assert!(
            close(path_length(&g).ok(), oracle::path_length(&full)),
            "case {case}: L"
        );

        // giant component
        let gcc = giant_component(&g);
        let comps = oracle::components(&full);
        let a = oracle::induced(&full, &comps[0]);
        assert_eq!(gcc.node_count(), comps[0].len(), "case {case}: gcc size");
        let gcc_names: Vec<String> = comps[0].iter().map(|&i| oracle::name(i)).collect();
        assert!(
            gcc.nodes.iter().eq(gcc_names.iter()),
            "case {case}: gcc members"
        );
        assert_eq!(
            adjacency(&gcc, false)
                .rows()
                .map(|r| r.to_vec())
                .collect::<Vec<_>>(),
            a
        );
        assert!(close(avg_degree(&gcc), oracle::avg_degree(&a)));
        assert!(close(clustering_avg(&gcc), oracle::clustering(&a)));
        assert!(close(path_length(&gcc).ok(), oracle::path_length(&a)));
        assert!(close(assortativity(&gcc), oracle::assortativity(&a)));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
}

fn named(edges: &[(&str, &str)]) -> SyntaxGraph {
    let mut g = SyntaxGraph::new_undirected();
    for (a, b) in edges {
        g.add_edge(a, b);
    }
    g
}

#[test]
fn closed_forms() {
    let triangle = named(&[("a", "b"), ("b", "c"), ("c", "a")]);
    assert_eq!(clustering_avg(&triangle), Some(1.0));
    assert_eq!(path_length(&triangle), Ok(1.0));

    let p3 = named(&[("a", "b"), ("b", "c")]);
    assert_eq!(clustering_avg(&p3), Some(0.0));
    assert_eq!(path_length(&p3), Ok(4.0 / 3.0));

    let s3 = named(&[("h", "a"), ("h", "b"), ("h", "c")]);
    assert_eq!(assortativity(&s3), Some(-1.0));

    let c4 = named(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
    assert_eq!(assortativity(&c4), None);

    for n in [2usize, 3, 7, 100] {
        let z1 = n as f64;
        assert_eq!(poisson_baseline(n, z1, z1 * z1), Some(1.0));
    }
}

#[test]
fn complete_graphs_have_unit_path_length() {
    for n in 2..12 {
        let mut g = SyntaxGraph::new_undirected();
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(&oracle::name(i), &oracle::name(j));
            }
        }
        assert_eq!(path_length(&g), Ok(1.0));
        assert_eq!(clustering_avg(&g), Some(if n > 2 { 1.0 } else { 0.0 }));
        assert_eq!(avg_degree(&g), Some((n - 1) as f64));
    }
}
