//! Brute-force reference implementations over dense 0/1 matrices.
//!
//! These deliberately share nothing with the library's adjacency-list code:
//! components by union-find on the matrix, distances by Floyd-Warshall,
//! clustering and assortativity straight from their defining sums.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Matrix = Vec<Vec<u8>>;

/// Random simple undirected graph on `n` named nodes as an edge list.
pub fn random_edges(rng: &mut StdRng, n: usize, p: f64) -> Vec<(String, String)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((name(i), name(j)));
            }
        }
    }
    edges
}

pub fn name(i: usize) -> String {
    format!("w{i:02}")
}

pub fn seeded(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Symmetric matrix over nodes `0..n` from the edge list (names `wNN`).
pub fn matrix(n: usize, edges: &[(String, String)]) -> Matrix {
    let mut a = vec![vec![0u8; n]; n];
    for (x, y) in edges {
        let i: usize = x[1..].parse().unwrap();
        let j: usize = y[1..].parse().unwrap();
        a[i][j] = 1;
        a[j][i] = 1;
    }
    a
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    r
}

/// Components as sorted index lists, largest first, ties by smallest
/// member list.
pub fn components(a: &Matrix) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            if a[i][j] == 1 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by(|x, y| y.len().cmp(&x.len()).then_with(|| x.cmp(y)));
    out
}

pub fn induced(a: &Matrix, keep: &[usize]) -> Matrix {
    keep.iter()
        .map(|&i| keep.iter().map(|&j| a[i][j]).collect())
        .collect()
}

pub fn degree(a: &Matrix, i: usize) -> usize {
    a[i].iter().map(|&x| x as usize).sum()
}

pub fn avg_degree(a: &Matrix) -> Option<f64> {
    let n = a.len();
    if n == 0 {
        return None;
    }
    let total: usize = (0..n).map(|i| degree(a, i)).sum();
    Some(total as f64 / n as f64)
}

pub fn local_clustering(a: &Matrix, i: usize) -> f64 {
    let nbrs: Vec<usize> = (0..a.len()).filter(|&j| a[i][j] == 1).collect();
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let mut s = 0usize;
    for &j in &nbrs {
        for &l in &nbrs {
            s += a[j][l] as usize;
        }
    }
    s as f64 / (k * (k - 1)) as f64
}

pub fn clustering(a: &Matrix) -> Option<f64> {
    let n = a.len();
    if n == 0 {
        return None;
    }
    let s: f64 = (0..n).map(|i| local_clustering(a, i)).sum();
    Some(s / n as f64)
}

/// Floyd-Warshall; `None` if disconnected or fewer than two nodes.
pub fn path_length(a: &Matrix) -> Option<f64> {
    let n = a.len();
    if n < 2 {
        return None;
    }
    const INF: usize = usize::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] == 1 {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let mut total = 0usize;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if d[i][j] >= INF {
                return None;
            }
            total += d[i][j];
            pairs += 1;
        }
    }
    Some(total as f64 / pairs as f64)
}

/// The Pearson formula evaluated literally with `c = 1/m`.
pub fn assortativity(a: &Matrix) -> Option<f64> {
    let n = a.len();
    let mut ends = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if a[i][j] == 1 {
                ends.push((degree(a, i) as f64, degree(a, j) as f64));
            }
        }
    }
    if ends.is_empty() {
        return None;
    }
    let c = 1.0 / ends.len() as f64;
    let s_jk: f64 = ends.iter().map(|(j, k)| j * k).sum();
    let s_half: f64 = ends.iter().map(|(j, k)| 0.5 * (j + k)).sum();
    let s_sq: f64 = ends.iter().map(|(j, k)| 0.5 * (j * j + k * k)).sum();
    let mean = c * s_half;
    let num = c * s_jk - mean * mean;
    let den = c * s_sq - mean * mean;
    if den.abs() < 1e-12 {
        return None;
    }
    Some(num / den)
}
