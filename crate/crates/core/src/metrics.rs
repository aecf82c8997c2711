//! Network statistics of a corpus graph and the average structure size.
//!
//! Graph measures are taken on the undirected giant component. Undefined
//! values (empty component, zero denominators) are `None`, never zero.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::age::Age;
use crate::annotation::AnnotatedDocument;
use crate::graph::{build_graph, giant_component, SyntaxGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricError {
    NodeNotFound(String),
    /// Path length needs at least two nodes.
    TooSmall,
    Disconnected,
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::NodeNotFound(w) => write!(f, "word {w:?} is not in the graph"),
            MetricError::TooSmall => f.write_str("path length needs at least two nodes"),
            MetricError::Disconnected => f.write_str("graph is not connected"),
        }
    }
}

impl core::error::Error for MetricError {}

/// `<k> = 2|E| / N` over the undirected graph.
pub fn avg_degree(g: &SyntaxGraph) -> Option<f64> {
    let n = g.node_count();
    if n == 0 {
        return None;
    }
    let m = if g.directed {
        crate::graph::undirected_view(g).edge_count()
    } else {
        g.edge_count()
    };
    Some(2.0 * m as f64 / n as f64)
}

fn local_from_lists(adj: &[Vec<usize>], i: usize) -> f64 {
    let nbrs = &adj[i];
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    // ordered pairs (j, l) of neighbours with a_jl = 1
    let linked: usize = nbrs
        .iter()
        .map(|&j| {
            adj[j]
                .iter()
                .filter(|l| nbrs.binary_search(l).is_ok())
                .count()
        })
        .sum();
    linked as f64 / (k * (k - 1)) as f64
}

/// Fraction of ordered neighbour pairs of `word` that are themselves linked.
/// Nodes of degree below 2 have clustering 0.
pub fn clustering_local(g: &SyntaxGraph, word: &str) -> Result<f64, MetricError> {
    let i = g
        .index()
        .get(word)
        .copied()
        .ok_or_else(|| MetricError::NodeNotFound(word.into()))?;
    Ok(local_from_lists(&g.neighbor_lists(), i))
}

/// Mean local clustering over all nodes.
pub fn clustering_avg(g: &SyntaxGraph) -> Option<f64> {
    let adj = g.neighbor_lists();
    if adj.is_empty() {
        return None;
    }
    let sum: f64 = (0..adj.len()).map(|i| local_from_lists(&adj, i)).sum();
    Some(sum / adj.len() as f64)
}

/// Mean shortest-path length over unordered node pairs (BFS from every node).
pub fn path_length(g: &SyntaxGraph) -> Result<f64, MetricError> {
    let adj = g.neighbor_lists();
    let n = adj.len();
    if n < 2 {
        return Err(MetricError::TooSmall);
    }
    let mut total: u64 = 0;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        for &d in &dist[s + 1..] {
            if d == usize::MAX {
                return Err(MetricError::Disconnected);
            }
            total += d as u64;
        }
    }
    let pairs = (n * (n - 1) / 2) as u64;
    Ok(total as f64 / pairs as f64)
}

/// Expected path length of a Poisson random graph,
/// `D = 1 + ln(N / z1) / ln(z2 / z1)`.
///
/// `None` unless `N >= 1`, `z1 > 0` and `z2 / z1 > 1`.
pub fn poisson_baseline(n: usize, z1: f64, z2: f64) -> Option<f64> {
    let defined = n > 0 && z1 > 0.0 && z2 / z1 > 1.0;
    if !defined {
        return None;
    }
    Some(1.0 + libm::log(n as f64 / z1) / libm::log(z2 / z1))
}

/// `|L - D| <= tol * D` and `L <= N / 10`.
pub fn small_world(path_length: f64, d_random: f64, n: usize, tol: f64) -> bool {
    (path_length - d_random).abs() <= tol * d_random && path_length <= n as f64 / 10.0
}

/// Pearson degree correlation over edges, with `j_i, k_i` the degrees of the
/// two endpoints of edge `i`. `None` without edges or when every endpoint has
/// the same degree.
pub fn assortativity(g: &SyntaxGraph) -> Option<f64> {
    let adj = g.neighbor_lists();
    let mut m: i128 = 0;
    let mut prod: i128 = 0; // sum j k
    let mut sum: i128 = 0; // sum (j + k)
    let mut sq: i128 = 0; // sum (j^2 + k^2)
    for (i, nbrs) in adj.iter().enumerate() {
        for &w in nbrs.iter().filter(|&&w| w > i) {
            let (j, k) = (nbrs.len() as i128, adj[w].len() as i128);
            m += 1;
            prod += j * k;
            sum += j + k;
            sq += j * j + k * k;
        }
    }
    if m == 0 {
        return None;
    }
    // multiply numerator and denominator by 4 m^2 to stay in integers
    let num = 4 * m * prod - sum * sum;
    let den = 2 * m * sq - sum * sum;
    if den == 0 {
        return None;
    }
    Some(num as f64 / den as f64)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StructureStats {
    pub total_size: usize,
    pub count: usize,
}

impl StructureStats {
    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.total_size as f64 / self.count as f64)
    }
}

/// Sizes of all contributing structures; isolated words count as size 1.
pub fn avg_structure_size<'a, I>(docs: I) -> StructureStats
where
    I: IntoIterator<Item = &'a AnnotatedDocument>,
{
    let mut stats = StructureStats::default();
    for d in docs {
        for u in &d.utterances {
            for s in u.contributing_structures() {
                stats.total_size += s.size();
                stats.count += 1;
            }
        }
    }
    stats
}

/// Node count used for the Poisson baseline and the `L << N` test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PoissonN {
    #[default]
    Gcc,
    Words,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsConfig {
    pub small_world_tol: f64,
    pub poisson_n: PoissonN,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        MetricsConfig {
            small_world_tol: 0.5,
            poisson_n: PoissonN::Gcc,
        }
    }
}

/// One row of the per-corpus report. Field names on the wire follow the CSV
/// header.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsReport {
    pub corpus_id: String,
    #[cfg_attr(feature = "serde", serde(rename = "N_w"))]
    pub n_words: usize,
    pub gcc_size: usize,
    pub avg_degree: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "C"))]
    pub clustering: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "L"))]
    pub path_length: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "D_poisson"))]
    pub poisson_d: Option<f64>,
    /// False whenever `L` or `D` is undefined.
    pub small_world: bool,
    #[cfg_attr(feature = "serde", serde(rename = "rho"))]
    pub assortativity: Option<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "S_avg"))]
    pub avg_structure_size: Option<f64>,
    pub structure_count: usize,
    pub age: Option<Age>,
    pub gcc_edges: usize,
    pub z1: Option<f64>,
    pub z2: Option<f64>,
}

/// Computes every measure for one corpus.
pub fn compute_report(
    corpus_id: &str,
    age: Option<Age>,
    docs: &[AnnotatedDocument],
    cfg: &MetricsConfig,
) -> MetricsReport {
    let graph = build_graph(docs);
    report_for_graph(corpus_id, age, &graph, avg_structure_size(docs), cfg)
}

pub fn report_for_graph(
    corpus_id: &str,
    age: Option<Age>,
    graph: &SyntaxGraph,
    structures: StructureStats,
    cfg: &MetricsConfig,
) -> MetricsReport {
    let gcc = giant_component(graph);
    let k = avg_degree(&gcc);
    let (z1, z2) = (k, k.map(|k| k * k));
    let n = match cfg.poisson_n {
        PoissonN::Gcc => gcc.node_count(),
        PoissonN::Words => graph.node_count(),
    };
    let path = path_length(&gcc).ok();
    let poisson_d = match (z1, z2) {
        (Some(z1), Some(z2)) => poisson_baseline(n, z1, z2),
        _ => None,
    };
    let small = match (path, poisson_d) {
        (Some(l), Some(d)) => small_world(l, d, n, cfg.small_world_tol),
        _ => false,
    };
    MetricsReport {
        corpus_id: corpus_id.into(),
        n_words: graph.node_count(),
        gcc_size: gcc.node_count(),
        avg_degree: k,
        clustering: clustering_avg(&gcc),
        path_length: path,
        poisson_d,
        small_world: small,
        assortativity: assortativity(&gcc),
        avg_structure_size: structures.mean(),
        structure_count: structures.count,
        age,
        gcc_edges: gcc.edge_count(),
        z1,
        z2,
    }
}
