//! Exhaustive enumeration of small decorated multigraphs.
//!
//! Vertices are labeled, so isomorphic shapes appear more than once; the
//! suite is small enough that this does not matter.

use crate::graph::{Edge, GraphManifoldData, Vertex};
use crate::rational::from_int;
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub b_values: Vec<i64>,
    pub k_values: Vec<i64>,
}

impl Default for SuiteConfig {
    /// Up to 3 vertices and 4 edges, `b ∈ {1, 2}`, `k ∈ {-2, …, 2}`.
    fn default() -> Self {
        SuiteConfig {
            max_vertices: 3,
            max_edges: 4,
            b_values: vec![1, 2],
            k_values: (-2..=2).collect(),
        }
    }
}

/// A connected multigraph with intersection numbers but no charges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub vertices: usize,
    /// `(tail, head, b)`.
    pub edges: Vec<(usize, usize, i64)>,
}

impl Shape {
    pub fn with_charges(&self, charges: &[i64]) -> GraphManifoldData {
        assert_eq!(charges.len(), self.vertices);
        GraphManifoldData {
            vertices: charges
                .iter()
                .enumerate()
                .map(|(i, &k)| Vertex {
                    id: format!("v{i}").as_str().into(),
                    charge: from_int(k),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(i, &(a, b, bb))| {
                    Edge::new(&format!("e{i}"), &format!("v{a}"), &format!("v{b}"), bb)
                })
                .collect(),
        }
    }
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut uf = UnionFind::new(n);
    let mut parts = n;
    for &(a, b) in edges {
        if uf.union(a, b) {
            parts -= 1;
        }
    }
    parts == 1
}

/// Non-decreasing sequences of length `len` over `0..k`.
fn multisets(k: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for t in start..k {
            cur.push(t);
            go(k, len, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, len, 0, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Every connected shape: edge multisets over vertex pairs `i ≤ j`, with
/// the `b` values of parallel edges taken as a multiset.
pub fn shapes(cfg: &SuiteConfig) -> Vec<Shape> {
    let mut out = Vec::new();
    for n in 1..=cfg.max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .collect();
        for m in (n - 1)..=cfg.max_edges {
            for types in multisets(pairs.len(), m) {
                let ends: Vec<(usize, usize)> = types.iter().map(|&t| pairs[t]).collect();
                if !connected(n, &ends) {
                    continue;
                }
                // b choices: non-decreasing within each run of equal types
                let mut assignments: Vec<Vec<i64>> = vec![Vec::new()];
                let mut i = 0;
                while i < m {
                    let run = types[i..].iter().take_while(|&&t| t == types[i]).count();
                    let choices = multisets(cfg.b_values.len(), run);
                    assignments = assignments
                        .into_iter()
                        .flat_map(|prefix| {
                            choices.iter().map(move |c| {
                                let mut p = prefix.clone();
                                p.extend(c.iter().map(|&x| cfg.b_values[x]));
                                p
                            })
                        })
                        .collect();
                    i += run;
                }
                for bs in assignments {
                    out.push(Shape {
                        vertices: n,
                        edges: ends.iter().zip(&bs).map(|(&(a, b), &bb)| (a, b, bb)).collect(),
                    });
                }
            }
        }
    }
    out
}

/// All charge vectors of length `n` over `k_values`.
pub fn charge_vectors(k_values: &[i64], n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                k_values.iter().map(move |&k| {
                    let mut p = p.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out
}

/// Every instance of the suite, shape by shape.
pub fn instances(cfg: &SuiteConfig) -> impl Iterator<Item = GraphManifoldData> + '_ {
    shapes(cfg).into_iter().flat_map(move |s| {
        charge_vectors(&cfg.k_values, s.vertices)
            .into_iter()
            .map(move |k| s.with_charges(&k))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate;

    #[test]
    fn one_vertex_shapes() {
        let cfg = SuiteConfig {
            max_vertices: 1,
            max_edges: 2,
            b_values: vec![1, 2],
            k_values: vec![0],
        };
        // no edge; one loop (2 b-values); two loops (3 b-multisets)
        assert_eq!(shapes(&cfg).len(), 1 + 2 + 3);
    }

    #[test]
    fn two_vertex_trees_and_cycles() {
        let cfg = SuiteConfig {
            max_vertices: 2,
            max_edges: 2,
            b_values: vec![1],
            k_values: vec![0],
        };
        let two: Vec<_> = shapes(&cfg).into_iter().filter(|s| s.vertices == 2).collect();
        // {01}, {00,01}, {01,01}, {01,11}
        assert_eq!(two.len(), 4);
    }

    #[test]
    fn default_suite_is_valid() {
        let cfg = SuiteConfig::default();
        for s in shapes(&cfg) {
            validate(&s.with_charges(&vec![0; s.vertices])).unwrap();
        }
        assert_eq!(charge_vectors(&cfg.k_values, 3).len(), 125);
    }
}
