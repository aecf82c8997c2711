//! Per-corpus syntax graphs over word types.
//!
//! Nodes are case-folded words; a directed edge `w_i -> w_k` exists when some
//! accepted structure has an arc from a token of `w_i` to a token of `w_k`.
//! Words and edges appear once however often they recur.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::annotation::{AnnotatedDocument, DependencyArc};

/// Where an edge (or a dropped self-loop) was first seen.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Provenance {
    pub corpus_id: String,
    /// 1-based utterance number within the document.
    pub utterance: usize,
    pub arc: DependencyArc,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SyntaxGraph {
    pub directed: bool,
    pub nodes: BTreeSet<String>,
    /// For undirected graphs each edge is stored once as `(smaller, larger)`.
    pub edges: BTreeSet<(String, String)>,
    pub provenance: BTreeMap<(String, String), Provenance>,
}

impl SyntaxGraph {
    pub fn new_directed() -> Self {
        SyntaxGraph {
            directed: true,
            ..Self::default()
        }
    }

    pub fn new_undirected() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn add_node(&mut self, w: &str) {
        if !self.nodes.contains(w) {
            self.nodes.insert(w.into());
        }
    }

    /// Adds an edge and its endpoints. Self-loops are ignored; returns whether
    /// the edge was new.
    pub fn add_edge(&mut self, from: &str, to: &str) -> bool {
        if from == to {
            return false;
        }
        self.add_node(from);
        self.add_node(to);
        let key = if self.directed || from < to {
            (from.into(), to.into())
        } else {
            (to.into(), from.into())
        };
        self.edges.insert(key)
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        let key = |a: &str, b: &str| (String::from(a), String::from(b));
        if self.directed {
            self.edges.contains(&key(from, to))
        } else {
            self.edges.contains(&key(from, to)) || self.edges.contains(&key(to, from))
        }
    }

    /// Lexicographic node index.
    pub fn index(&self) -> BTreeMap<&str, usize> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), i))
            .collect()
    }

    /// Subgraph induced by `keep`.
    pub fn induced(&self, keep: &BTreeSet<String>) -> SyntaxGraph {
        let mut g = SyntaxGraph {
            directed: self.directed,
            nodes: self.nodes.intersection(keep).cloned().collect(),
            ..SyntaxGraph::default()
        };
        for e in &self.edges {
            if keep.contains(&e.0) && keep.contains(&e.1) {
                g.edges.insert(e.clone());
                if let Some(p) = self.provenance.get(e) {
                    g.provenance.insert(e.clone(), p.clone());
                }
            }
        }
        g
    }

    /// Undirected degree per node, in index order.
    pub fn degrees(&self) -> Vec<usize> {
        let idx = self.index();
        let mut deg = vec![0usize; self.nodes.len()];
        for (a, b) in undirected_pairs(self) {
            deg[idx[a.as_str()]] += 1;
            deg[idx[b.as_str()]] += 1;
        }
        deg
    }

    /// Directed `(in, out)` degree per node, in index order.
    pub fn in_out_degrees(&self) -> Vec<(usize, usize)> {
        let idx = self.index();
        let mut deg = vec![(0usize, 0usize); self.nodes.len()];
        for (a, b) in &self.edges {
            deg[idx[a.as_str()]].1 += 1;
            deg[idx[b.as_str()]].0 += 1;
        }
        deg
    }

    /// Neighbor lists of the undirected view, indexed lexicographically.
    pub fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        let idx = self.index();
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (a, b) in undirected_pairs(self) {
            let (i, j) = (idx[a.as_str()], idx[b.as_str()]);
            adj[i].push(j);
            adj[j].push(i);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }
}

fn undirected_pairs(g: &SyntaxGraph) -> BTreeSet<(String, String)> {
    if !g.directed {
        return g.edges.clone();
    }
    g.edges
        .iter()
        .map(|(a, b)| {
            if a < b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            }
        })
        .collect()
}

/// An arc joining two tokens of the same word type, dropped at build time.
pub type SelfLoop = Provenance;

/// Accumulates documents of one corpus into a directed graph.
#[derive(Debug)]
pub struct GraphBuilder {
    graph: SyntaxGraph,
    self_loops: Vec<SelfLoop>,
}

impl Default for GraphBuilder {
    fn default() -> Self {
        GraphBuilder {
            graph: SyntaxGraph::new_directed(),
            self_loops: Vec::new(),
        }
    }
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_document(&mut self, doc: &AnnotatedDocument) {
        for (i, u) in doc.utterances.iter().enumerate() {
            for s in u.contributing_structures() {
                for &m in &s.members {
                    if let Some(t) = u.token(m) {
                        self.graph.add_node(&t.norm);
                    }
                }
                for &arc in &s.arcs {
                    let (Some(d), Some(h)) = (u.token(arc.dependent), u.token(arc.head)) else {
                        continue;
                    };
                    let prov = Provenance {
                        corpus_id: doc.corpus_id.clone(),
                        utterance: i + 1,
                        arc,
                    };
                    if d.norm == h.norm {
                        self.self_loops.push(prov);
                    } else if self.graph.add_edge(&d.norm, &h.norm) {
                        self.graph
                            .provenance
                            .insert((d.norm.clone(), h.norm.clone()), prov);
                    }
                }
            }
        }
    }

    pub fn self_loops(&self) -> &[SelfLoop] {
        &self.self_loops
    }

    pub fn finish(self) -> (SyntaxGraph, Vec<SelfLoop>) {
        (self.graph, self.self_loops)
    }
}

/// Builds the directed syntax graph of a set of documents. Self-loops are
/// dropped; use [`GraphBuilder`] to see them.
pub fn build_graph<'a, I>(docs: I) -> SyntaxGraph
where
    I: IntoIterator<Item = &'a AnnotatedDocument>,
{
    let mut b = GraphBuilder::new();
    for d in docs {
        b.add_document(d);
    }
    b.finish().0
}

/// Symmetric version of `g`; opposite edges collapse into one.
pub fn undirected_view(g: &SyntaxGraph) -> SyntaxGraph {
    let mut u = SyntaxGraph::new_undirected();
    u.nodes = g.nodes.clone();
    for (a, b) in &g.edges {
        let key = if a < b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        if let Some(p) = g.provenance.get(&(a.clone(), b.clone())) {
            u.provenance.entry(key.clone()).or_insert_with(|| p.clone());
        }
        u.edges.insert(key);
    }
    u
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Component {
    pub members: BTreeSet<String>,
}

impl Component {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Weakly connected components, largest first. Equal sizes are ordered by
/// their (lexicographically compared) member sets, so the first element is
/// the giant component.
pub fn components(g: &SyntaxGraph) -> Vec<Component> {
    let names: Vec<&String> = g.nodes.iter().collect();
    let adj = g.neighbor_lists();
    let mut seen = vec![false; names.len()];
    let mut out = Vec::new();
    for start in 0..names.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            members.insert(names[v].clone());
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.push(Component { members });
    }
    out.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then_with(|| a.members.cmp(&b.members))
    });
    out
}

/// Undirected subgraph induced by the giant component (empty graph if `g`
/// has no nodes).
pub fn giant_component(g: &SyntaxGraph) -> SyntaxGraph {
    let u = if g.directed {
        undirected_view(g)
    } else {
        g.clone()
    };
    match components(&u).into_iter().next() {
        Some(c) => u.induced(&c.members),
        None => SyntaxGraph::new_undirected(),
    }
}

/// Dense 0/1 adjacency matrix with a lexicographic node index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    pub nodes: Vec<String>,
    cells: Vec<u8>,
}

impl AdjacencyMatrix {
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.n() + j]
    }

    pub fn row(&self, i: usize) -> &[u8] {
        let n = self.n();
        &self.cells[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        (0..self.n()).map(move |i| self.row(i))
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// `A_ij = 1` iff `w_i -> w_j`; the undirected form also sets `A_ji`.
pub fn adjacency(g: &SyntaxGraph, directed: bool) -> AdjacencyMatrix {
    let idx = g.index();
    let n = g.nodes.len();
    let mut cells = vec![0u8; n * n];
    for (a, b) in &g.edges {
        let (i, j) = (idx[a.as_str()], idx[b.as_str()]);
        cells[i * n + j] = 1;
        if !directed || !g.directed {
            cells[j * n + i] = 1;
        }
    }
    AdjacencyMatrix {
        nodes: g.nodes.iter().cloned().collect(),
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn directed(edges: &[(&str, &str)]) -> SyntaxGraph {
        let mut g = SyntaxGraph::new_directed();
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    #[test]
    fn opposite_edges_collapse() {
        let u = undirected_view(&directed(&[("a", "b"), ("b", "a")]));
        assert_eq!(u.edge_count(), 1);
        assert!(u.has_edge("b", "a"));
    }

    #[test]
    fn empty_graph() {
        let g = SyntaxGraph::new_directed();
        assert_eq!(undirected_view(&g), SyntaxGraph::new_undirected());
        assert!(components(&g).is_empty());
        assert_eq!(adjacency(&g, true).n(), 0);
        assert_eq!(giant_component(&g).node_count(), 0);
    }

    #[test]
    fn single_edge_component() {
        let c = components(&directed(&[("a", "b")]));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].len(), 2);
    }

    #[test]
    fn isolated_nodes_are_singletons() {
        let mut g = SyntaxGraph::new_directed();
        g.add_node("x");
        g.add_node("y");
        let c = components(&g);
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn gcc_tie_breaks_lexicographically() {
        let g = directed(&[("m", "n"), ("b", "c")]);
        let c = components(&g);
        assert_eq!(c[0].members.iter().next().unwrap(), "b");
    }

    #[test]
    fn adjacency_forms() {
        let g = directed(&[("a", "b")]);
        let d = adjacency(&g, true);
        assert_eq!((d.get(0, 1), d.get(1, 0)), (1, 0));
        let u = adjacency(&g, false);
        assert_eq!((u.get(0, 1), u.get(1, 0)), (1, 1));
        assert!(u.is_symmetric());
        assert!(!d.is_symmetric());
    }

    #[test]
    fn self_loops_are_not_edges() {
        let mut g = SyntaxGraph::new_directed();
        assert!(!g.add_edge("need", "need"));
        assert_eq!(g.edge_count(), 0);
    }
}
