//! Side outputs: extracted utterances, graphs and report tables.

use childnet_core::graph::{adjacency, SyntaxGraph};
use childnet_core::ingest::{normalize, RawUtterance, Token};
use childnet_core::metrics::MetricsReport;
use serde::{Deserialize, Serialize};

/// One extracted utterance as written to the utterance JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtteranceRecord {
    pub corpus: String,
    pub line_no: usize,
    pub tokens: Vec<Token>,
}

impl From<&RawUtterance> for UtteranceRecord {
    fn from(u: &RawUtterance) -> Self {
        UtteranceRecord {
            corpus: u.corpus_id.clone(),
            line_no: u.line_no,
            tokens: normalize(u),
        }
    }
}

pub fn utterances_json(records: &[UtteranceRecord]) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(records).expect("records serialize");
    out.push(b'\n');
    out
}

/// Tab-separated edge list preceded by the node list, so isolated nodes
/// survive.
pub fn edge_list(g: &SyntaxGraph) -> String {
    let mut out = String::from("# nodes\n");
    for n in &g.nodes {
        out.push_str(n);
        out.push('\n');
    }
    out.push_str("# edges\n");
    for (a, b) in &g.edges {
        out.push_str(a);
        out.push('\t');
        out.push_str(b);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct NodeRecord<'a> {
    word: &'a str,
    in_degree: usize,
    out_degree: usize,
    degree: usize,
}

#[derive(Serialize)]
struct GraphRecord<'a> {
    directed: bool,
    nodes: Vec<NodeRecord<'a>>,
    edges: Vec<[&'a str; 2]>,
}

/// Nodes with directed in/out degree and undirected degree, plus edges.
pub fn graph_json(g: &SyntaxGraph) -> Vec<u8> {
    let io = g.in_out_degrees();
    let und = g.degrees();
    let nodes = g
        .nodes
        .iter()
        .enumerate()
        .map(|(i, w)| NodeRecord {
            word: w,
            in_degree: io[i].0,
            out_degree: io[i].1,
            degree: und[i],
        })
        .collect();
    let rec = GraphRecord {
        directed: g.directed,
        nodes,
        edges: g
            .edges
            .iter()
            .map(|(a, b)| [a.as_str(), b.as_str()])
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&rec).expect("graph serializes");
    out.push(b'\n');
    out
}

/// Dense 0/1 matrix: a header line of node names, then one row per node.
pub fn matrix_text(g: &SyntaxGraph, directed: bool) -> String {
    let m = adjacency(g, directed);
    let mut out = String::new();
    out.push_str(&m.nodes.join("\t"));
    out.push('\n');
    for row in m.rows() {
        let cells: Vec<&str> = row
            .iter()
            .map(|&c| if c == 1 { "1" } else { "0" })
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// CSV column order of the report table.
pub const REPORT_COLUMNS: [&str; 11] = [
    "corpus_id",
    "N_w",
    "gcc_size",
    "avg_degree",
    "C",
    "L",
    "D_poisson",
    "small_world",
    "rho",
    "S_avg",
    "structure_count",
];

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per report; undefined values are empty cells.
pub fn reports_csv(reports: &[MetricsReport]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_COLUMNS).expect("in-memory write");
    for r in reports {
        w.write_record([
            r.corpus_id.clone(),
            r.n_words.to_string(),
            r.gcc_size.to_string(),
            cell(r.avg_degree),
            cell(r.clustering),
            cell(r.path_length),
            cell(r.poisson_d),
            r.small_world.to_string(),
            cell(r.assortativity),
            cell(r.avg_structure_size),
            r.structure_count.to_string(),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Reports as a JSON array; undefined values are `null`.
pub fn reports_json(reports: &[MetricsReport]) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(reports).expect("reports serialize");
    out.push(b'\n');
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn emit(reports: &[MetricsReport], format: Format) -> Vec<u8> {
    match format {
        Format::Csv => reports_csv(reports),
        Format::Json => reports_json(reports),
    }
}
