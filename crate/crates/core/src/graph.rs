//! The decorated dual graph of a graph manifold.
//!
//! Vertices are Seifert blocks carrying a rational charge `k_v`; edges are
//! JSJ tori carrying the intersection number `b_e = |b_w|` of the two fiber
//! classes and the sign of `b_w` for the stored orientation. Loops and
//! parallel edges are allowed.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub String);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

impl From<&str> for EdgeId {
    fn from(s: &str) -> Self {
        EdgeId(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub charge: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    /// Equal ends make a self-loop. The stored orientation `w` runs from
    /// `ends[0]` to `ends[1]`.
    pub ends: [VertexId; 2],
    pub b: i64,
    /// Sign of `b_w` for the stored orientation; `b_{-w} = b_w`.
    pub bw_sign: i8,
}

impl Edge {
    pub fn new(id: &str, a: &str, b_end: &str, b: i64) -> Self {
        Edge {
            id: id.into(),
            ends: [a.into(), b_end.into()],
            b,
            bw_sign: 1,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The signed intersection number `b_w`.
    pub fn signed_b(&self) -> i64 {
        self.b * i64::from(self.bw_sign)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphManifoldData {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("edge {edge} has non-positive intersection number {b}")]
    NonPositiveB { edge: EdgeId, b: i64 },
    #[error("edge {edge} has bw_sign {sign}, expected +1 or -1")]
    BadSign { edge: EdgeId, sign: i8 },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge {0}: fibers match across the torus (b_w = 0)")]
    FiberMatch(EdgeId),
    #[error("edge {edge}: gluing determinant is {det}, expected -1")]
    BadDeterminant { edge: EdgeId, det: i64 },
    #[error("edge {0} has no gluing datum")]
    MissingGluing(EdgeId),
    #[error("gluing datum for unknown edge {0}")]
    UnknownEdge(EdgeId),
}

/// All violations found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid graph manifold data: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationErrors(pub Vec<GraphError>);

pub type ValidationResult = Result<(), ValidationErrors>;

/// Checks ids, intersection numbers, edge endpoints and connectivity.
pub fn validate(data: &GraphManifoldData) -> ValidationResult {
    let mut errs = Vec::new();
    if data.vertices.is_empty() {
        errs.push(GraphError::EmptyGraph);
    }
    let mut seen = HashSet::new();
    let mut index = HashMap::new();
    for (i, v) in data.vertices.iter().enumerate() {
        if !seen.insert(v.id.0.as_str()) {
            errs.push(GraphError::DuplicateId(v.id.0.clone()));
        }
        index.entry(&v.id).or_insert(i);
    }
    let mut edge_seen = HashSet::new();
    for e in &data.edges {
        if !edge_seen.insert(e.id.0.as_str()) {
            errs.push(GraphError::DuplicateId(e.id.0.clone()));
        }
        if e.b < 1 {
            errs.push(GraphError::NonPositiveB {
                edge: e.id.clone(),
                b: e.b,
            });
        }
        if e.bw_sign != 1 && e.bw_sign != -1 {
            errs.push(GraphError::BadSign {
                edge: e.id.clone(),
                sign: e.bw_sign,
            });
        }
        for end in &e.ends {
            if !index.contains_key(end) {
                errs.push(GraphError::UnknownVertex(end.clone()));
            }
        }
    }
    if !data.vertices.is_empty() {
        let n = data.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for e in &data.edges {
            if let (Some(&a), Some(&b)) = (index.get(&e.ends[0]), index.get(&e.ends[1])) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let components = count_components(&adj);
        if components > 1 {
            errs.push(GraphError::DisconnectedGraph { components });
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(ValidationErrors(errs))
    }
}

fn count_components(adj: &[Vec<usize>]) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut count = 0;
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    count
}

/// An edge traversed in one direction. Self-loops give two oriented edges
/// with the same tail and head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub edge: usize,
    pub tail: usize,
    pub head: usize,
    /// `false` for the stored orientation `ends[0] -> ends[1]`.
    pub reversed: bool,
}

impl OrientedEdge {
    pub fn opposite(self) -> OrientedEdge {
        OrientedEdge {
            edge: self.edge,
            tail: self.head,
            head: self.tail,
            reversed: !self.reversed,
        }
    }
}

/// Validated data with vertex indices resolved.
#[derive(Debug, Clone)]
pub struct GraphManifold {
    data: GraphManifoldData,
    index: HashMap<VertexId, usize>,
    ends: Vec<(usize, usize)>,
}

impl GraphManifold {
    pub fn new(data: GraphManifoldData) -> Result<Self, ValidationErrors> {
        validate(&data)?;
        let index: HashMap<_, _> = data
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
        let ends = data
            .edges
            .iter()
            .map(|e| (index[&e.ends[0]], index[&e.ends[1]]))
            .collect();
        Ok(GraphManifold { data, index, ends })
    }

    pub fn data(&self) -> &GraphManifoldData {
        &self.data
    }

    pub fn into_data(self) -> GraphManifoldData {
        self.data
    }

    pub fn vertex_count(&self) -> usize {
        self.data.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.data.edges.len()
    }

    pub fn vertex_index(&self, id: &VertexId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.data.vertices[i]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.data.edges[e]
    }

    pub fn charge(&self, v: usize) -> &Rational {
        &self.data.vertices[v].charge
    }

    pub fn charges(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.data.vertices.iter().map(|v| &v.charge)
    }

    /// Endpoint indices of edge `e` in stored order.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn edge_b(&self, e: usize) -> Rational {
        rational::from_int(self.data.edges[e].b)
    }

    /// Every oriented edge initiating at `v`; a self-loop contributes both
    /// orientations.
    pub fn star(&self, v: usize) -> Vec<OrientedEdge> {
        let mut out = Vec::new();
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            if a == v {
                out.push(OrientedEdge {
                    edge: e,
                    tail: a,
                    head: b,
                    reversed: false,
                });
            }
            if b == v {
                out.push(OrientedEdge {
                    edge: e,
                    tail: b,
                    head: a,
                    reversed: true,
                });
            }
        }
        out
    }

    /// Same graph with every charge negated (orientation reversal of `M`).
    pub fn negated(&self) -> GraphManifold {
        let mut g = self.clone();
        for v in &mut g.data.vertices {
            v.charge = -v.charge.clone();
        }
        g
    }
}

/// Oriented edges with tail `v`, looked up by id.
pub fn oriented_star(g: &GraphManifold, v: &VertexId) -> Result<Vec<OrientedEdge>, GraphError> {
    let i = g
        .vertex_index(v)
        .ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
    Ok(g.star(i))
}

/// Unit-free shape of a dual graph: ids and incidences only.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphShape {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(EdgeId, [VertexId; 2])>,
}

/// Gluing across the torus of `edge`, for the orientation `w` from
/// `ends[0]` to `ends[1]`.
///
/// Row 0 holds the coordinates of the far fiber `f_{-w}` and row 1 those of
/// the far section `s_{-w}`, both in the near basis `(f_w, s_w)`:
/// `f_{-w} = m[0][0] f_w + m[0][1] s_w`, `s_{-w} = m[1][0] f_w + m[1][1] s_w`.
/// Near sections satisfy `f_w ∧_w s_w = 1` and the sections of each block
/// are the boundary curves of one horizontal cross-section, so they sum to
/// zero in the homology of the block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingDatum {
    pub edge: EdgeId,
    pub matrix: [[i64; 2]; 2],
}

impl GluingDatum {
    pub fn determinant(&self) -> i64 {
        let m = &self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Re-expresses the datum after `s_w -> s_w + shift_near * f_w` on the
    /// near side and `s_{-w} -> s_{-w} + shift_far * f_{-w}` on the far side.
    pub fn change_sections(&self, shift_near: i64, shift_far: i64) -> GluingDatum {
        let [[a, b], [c, d]] = self.matrix;
        // near substitution: s_w = s_w' - m f_w
        let (a, c) = (a - b * shift_near, c - d * shift_near);
        // far substitution: s_{-w}' = s_{-w} + m f_{-w}
        let (c, d) = (c + shift_far * a, d + shift_far * b);
        GluingDatum {
            edge: self.edge.clone(),
            matrix: [[a, b], [c, d]],
        }
    }
}

/// Reduces raw gluing matrices of a graph manifold pasted from product
/// blocks `F × S¹` to charges and intersection numbers.
///
/// For `w` from `v`: `b_w = m[0][1]` and `a_w = m[0][0]`; for the opposite
/// orientation `b_{-w} = b_w` and `a_{-w} = -m[1][1]`. The charge is
/// `k_v = Σ_{w ∈ ∂v} a_w / b_w`.
pub fn ingest_gluing(
    shape: &GraphShape,
    gluings: &[GluingDatum],
) -> Result<GraphManifoldData, GraphError> {
    let mut by_edge: HashMap<&EdgeId, &GluingDatum> = HashMap::new();
    for g in gluings {
        if !shape.edges.iter().any(|(id, _)| id == &g.edge) {
            return Err(GraphError::UnknownEdge(g.edge.clone()));
        }
        if by_edge.insert(&g.edge, g).is_some() {
            return Err(GraphError::DuplicateId(g.edge.0.clone()));
        }
    }
    let index: HashMap<&VertexId, usize> = shape
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut charges = vec![Rational::zero(); shape.vertices.len()];
    let mut edges = Vec::with_capacity(shape.edges.len());
    for (id, ends) in &shape.edges {
        let g = by_edge
            .get(id)
            .ok_or_else(|| GraphError::MissingGluing(id.clone()))?;
        let det = g.determinant();
        if det != -1 {
            return Err(GraphError::BadDeterminant {
                edge: id.clone(),
                det,
            });
        }
        let [[a_near, bw], [_, d]] = g.matrix;
        if bw == 0 {
            return Err(GraphError::FiberMatch(id.clone()));
        }
        let tail = *index
            .get(&ends[0])
            .ok_or_else(|| GraphError::UnknownVertex(ends[0].clone()))?;
        let head = *index
            .get(&ends[1])
            .ok_or_else(|| GraphError::UnknownVertex(ends[1].clone()))?;
        let bw_big = BigInt::from(bw);
        charges[tail] += Rational::new(BigInt::from(a_near), bw_big.clone());
        charges[head] += Rational::new(BigInt::from(-d), bw_big);
        edges.push(Edge {
            id: id.clone(),
            ends: ends.clone(),
            b: bw.abs(),
            bw_sign: if bw > 0 { 1 } else { -1 },
        });
    }
    Ok(GraphManifoldData {
        vertices: shape
            .vertices
            .iter()
            .cloned()
            .zip(charges)
            .map(|(id, charge)| Vertex { id, charge })
            .collect(),
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, from_int};

    fn vx(id: &str, k: i64) -> Vertex {
        Vertex {
            id: id.into(),
            charge: from_int(k),
        }
    }

    fn two_vertex(edges: Vec<Edge>) -> GraphManifoldData {
        GraphManifoldData {
            vertices: vec![vx("a", 1), vx("b", 1)],
            edges,
        }
    }

    #[test]
    fn minimal_connected_graph_is_valid() {
        assert!(validate(&two_vertex(vec![Edge::new("e", "a", "b", 1)])).is_ok());
    }

    #[test]
    fn no_edges_is_disconnected() {
        let err = validate(&two_vertex(vec![])).unwrap_err();
        assert_eq!(
            err.0,
            vec![GraphError::DisconnectedGraph { components: 2 }]
        );
    }

    #[test]
    fn zero_b_rejected() {
        let err = validate(&two_vertex(vec![Edge::new("e", "a", "b", 0)])).unwrap_err();
        assert!(matches!(err.0[0], GraphError::NonPositiveB { b: 0, .. }));
    }

    #[test]
    fn duplicate_and_unknown_ids() {
        let mut d = two_vertex(vec![Edge::new("e", "a", "b", 1), Edge::new("e", "a", "z", 1)]);
        d.vertices.push(vx("a", 0));
        let errs = validate(&d).unwrap_err().0;
        assert!(errs.contains(&GraphError::DuplicateId("a".into())));
        assert!(errs.contains(&GraphError::DuplicateId("e".into())));
        assert!(errs.contains(&GraphError::UnknownVertex("z".into())));
    }

    #[test]
    fn empty_graph() {
        let errs = validate(&GraphManifoldData::default()).unwrap_err().0;
        assert_eq!(errs, vec![GraphError::EmptyGraph]);
    }

    #[test]
    fn stars() {
        let d = GraphManifoldData {
            vertices: vec![vx("a", 0), vx("b", 0)],
            edges: vec![Edge::new("loop", "a", "a", 1), Edge::new("e", "a", "b", 2)],
        };
        let g = GraphManifold::new(d).unwrap();
        let sa = oriented_star(&g, &"a".into()).unwrap();
        assert_eq!(sa.len(), 3);
        assert_eq!(sa.iter().filter(|w| w.edge == 0).count(), 2);
        assert_eq!(oriented_star(&g, &"b".into()).unwrap().len(), 1);
        assert_eq!(
            oriented_star(&g, &"q".into()),
            Err(GraphError::UnknownVertex("q".into()))
        );
        let total: usize = (0..2).map(|v| g.star(v).len()).sum();
        assert_eq!(total, 2 * g.edge_count());
        for v in 0..2 {
            for w in g.star(v) {
                assert_eq!(w.opposite().opposite(), w);
                assert!(g.star(w.head).contains(&w.opposite()));
            }
        }
    }

    fn shape_ab() -> GraphShape {
        GraphShape {
            vertices: vec!["a".into(), "b".into()],
            edges: vec![("e".into(), ["a".into(), "b".into()])],
        }
    }

    #[test]
    fn gluing_unit_contribution() {
        // f_{-w} = f_w + s_w; s_{-w} = 2 f_w + s_w gives det -1.
        let g = GluingDatum {
            edge: "e".into(),
            matrix: [[1, 1], [2, 1]],
        };
        let d = ingest_gluing(&shape_ab(), &[g]).unwrap();
        assert_eq!(d.edges[0].b, 1);
        assert_eq!(d.edges[0].bw_sign, 1);
        assert_eq!(d.vertices[0].charge, from_int(1));
        assert_eq!(d.vertices[1].charge, from_int(-1));
    }

    #[test]
    fn gluing_zero_coefficient_leaves_charge() {
        let g = GluingDatum {
            edge: "e".into(),
            matrix: [[0, 1], [1, 0]],
        };
        let d = ingest_gluing(&shape_ab(), &[g]).unwrap();
        assert_eq!(d.vertices[0].charge, from_int(0));
        assert_eq!(d.vertices[1].charge, from_int(0));
    }

    #[test]
    fn gluing_negative_b() {
        // f_{-w} = 3 f_w - 2 s_w, s_{-w} = f_w - s_w: det = -3 + 2 = -1
        let g = GluingDatum {
            edge: "e".into(),
            matrix: [[3, -2], [1, -1]],
        };
        let d = ingest_gluing(&shape_ab(), &[g]).unwrap();
        assert_eq!(d.edges[0].b, 2);
        assert_eq!(d.edges[0].bw_sign, -1);
        assert_eq!(d.vertices[0].charge, frac(-3, 2));
        assert_eq!(d.vertices[1].charge, frac(-1, 2));
    }

    #[test]
    fn gluing_errors() {
        let bad_det = GluingDatum {
            edge: "e".into(),
            matrix: [[1, 1], [0, 1]],
        };
        assert_eq!(
            ingest_gluing(&shape_ab(), &[bad_det]),
            Err(GraphError::BadDeterminant {
                edge: "e".into(),
                det: 1
            })
        );
        let fiber = GluingDatum {
            edge: "e".into(),
            matrix: [[1, 0], [0, -1]],
        };
        assert_eq!(
            ingest_gluing(&shape_ab(), &[fiber]),
            Err(GraphError::FiberMatch("e".into()))
        );
        assert_eq!(
            ingest_gluing(&shape_ab(), &[]),
            Err(GraphError::MissingGluing("e".into()))
        );
    }

    #[test]
    fn far_side_is_inverse_gluing() {
        // Reading the same torus from the other side must give the same
        // edge data and charges: the inverse of M (det -1) is [[-d, b], [c, -a]].
        let m = [[2, 3], [1, 1]];
        let fwd = GluingDatum {
            edge: "e".into(),
            matrix: m,
        };
        let back = GluingDatum {
            edge: "e".into(),
            matrix: [[-m[1][1], m[0][1]], [m[1][0], -m[0][0]]],
        };
        let rev_shape = GraphShape {
            vertices: vec!["a".into(), "b".into()],
            edges: vec![("e".into(), ["b".into(), "a".into()])],
        };
        let d1 = ingest_gluing(&shape_ab(), &[fwd]).unwrap();
        let d2 = ingest_gluing(&rev_shape, &[back]).unwrap();
        assert_eq!(d1.vertices, d2.vertices);
        assert_eq!(d1.edges[0].signed_b(), d2.edges[0].signed_b());
    }

    #[test]
    fn section_change_compensated_within_block() {
        // a has two boundary tori: shifting one section by +m and the other
        // by -m keeps the sections summing to zero.
        let shape = GraphShape {
            vertices: vec!["a".into(), "b".into()],
            edges: vec![
                ("e1".into(), ["a".into(), "b".into()]),
                ("e2".into(), ["a".into(), "b".into()]),
            ],
        };
        let g1 = GluingDatum {
            edge: "e1".into(),
            matrix: [[1, 1], [2, 1]],
        };
        let g2 = GluingDatum {
            edge: "e2".into(),
            matrix: [[3, -2], [1, -1]],
        };
        let base = ingest_gluing(&shape, &[g1.clone(), g2.clone()]).unwrap();
        for m in -3..=3 {
            let shifted = ingest_gluing(
                &shape,
                &[g1.change_sections(m, 2 * m), g2.change_sections(-m, -2 * m)],
            )
            .unwrap();
            assert_eq!(shifted, base, "m = {m}");
        }
        // an uncompensated shift moves the charge by -m
        let lone = ingest_gluing(&shape, &[g1.change_sections(2, 0), g2]).unwrap();
        assert_eq!(
            lone.vertices[0].charge,
            base.vertices[0].charge.clone() - from_int(2)
        );
    }
}
