//! Signed components of the dual graph.
//!
//! Two vertices are equivalent when a path joins them along which
//! consecutive charges have strictly positive product. The quotient by this
//! relation is the graph of signed components `G(U, E₀)`; when it is
//! bipartite and some charge is nonzero, a 2-coloring with a positive charge
//! on the `P` side defines the sign function `s`.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::graph::GraphManifold;
use crate::rational::{self, Rational};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
    Zero,
}

impl Sign {
    pub fn of(q: &Rational) -> Sign {
        match rational::signum(q) {
            1 => Sign::Pos,
            -1 => Sign::Neg,
            _ => Sign::Zero,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
            Sign::Zero => "0",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    /// Vertex indices in increasing order.
    pub members: Vec<usize>,
    /// Common sign of the input charges of the members.
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parts {
    pub p: Vec<usize>,
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedComponents {
    pub classes: Vec<Class>,
    /// Class index of every vertex.
    pub class_of: Vec<usize>,
    /// Edges of `E₀`, as edge indices.
    pub e0_edges: Vec<usize>,
    /// One class pair per element of `e0_edges`.
    pub factor_edges: Vec<(usize, usize)>,
    pub bipartite: bool,
    pub parts: Option<Parts>,
    /// Sign function `s: V -> {0, ±1}`.
    pub s: Vec<i8>,
    /// Whether the charges were negated (orientation of `M` reversed) to put
    /// a positive charge on the `P` side.
    pub orientation_flipped: bool,
    /// Some nonzero-charge class sits on the side opposite to the sign of its
    /// (oriented) charge, so `s(v) k_v < 0` there.
    pub sign_conflict: bool,
}

/// Equivalence classes: union along edges whose endpoint charges have
/// strictly positive product. Returns a class label per vertex, labels
/// numbered by first member.
pub fn compute_classes(g: &GraphManifold) -> Vec<usize> {
    let mut uf = UnionFind::new(g.vertex_count());
    for e in 0..g.edge_count() {
        let (a, b) = g.ends(e);
        if a != b && (g.charge(a) * g.charge(b)).is_positive() {
            uf.union(a, b);
        }
    }
    uf.labels()
}

/// The edge set `E₀` and the factor multigraph on classes.
///
/// An edge belongs to `E₀` unless it is equivalent to a vertex, that is,
/// unless both ends lie in one class of nonzero charge. A self-loop at a
/// zero-charge vertex is therefore kept, as a loop of the factor graph.
pub fn factor_graph(g: &GraphManifold, class_of: &[usize]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut e0 = Vec::new();
    let mut pairs = Vec::new();
    for e in 0..g.edge_count() {
        let (a, b) = g.ends(e);
        let internal = class_of[a] == class_of[b] && !g.charge(a).is_zero();
        if !internal {
            e0.push(e);
            pairs.push((class_of[a], class_of[b]));
        }
    }
    (e0, pairs)
}

/// Proper 2-coloring (+1/-1) of a connected multigraph, `None` when it has
/// an odd cycle (loops included). Node 0 gets +1.
fn two_color(nodes: usize, edges: &[(usize, usize)]) -> Option<Vec<i8>> {
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in edges {
        if a == b {
            return None;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut color = vec![0i8; nodes];
    for start in 0..nodes {
        if color[start] != 0 {
            continue;
        }
        color[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if color[y] == 0 {
                    color[y] = -color[x];
                    queue.push_back(y);
                } else if color[y] == color[x] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

impl SignedComponents {
    pub fn compute(g: &GraphManifold) -> SignedComponents {
        let class_of = compute_classes(g);
        let (e0, pairs) = factor_graph(g, &class_of);
        sign_function(g, class_of, e0, pairs)
    }

    pub fn class_id(&self, u: usize) -> String {
        format!("u{u}")
    }

    /// `s(v) k_v` with `k_v` taken in the chosen orientation of `M`.
    pub fn signed_charge(&self, g: &GraphManifold, v: usize) -> Rational {
        let k = g.charge(v) * rational::from_int(i64::from(self.s[v]));
        if self.orientation_flipped {
            -k
        } else {
            k
        }
    }

    /// +1 or -1 for an internal edge of a `P` or `N` class, 0 otherwise.
    pub fn edge_side(&self, g: &GraphManifold, e: usize) -> i8 {
        if self.e0_edges.binary_search(&e).is_ok() {
            return 0;
        }
        let (a, _) = g.ends(e);
        self.s[a]
    }
}

/// Completes the components with bipartiteness, parts and `s`.
///
/// The 2-coloring of the connected factor graph is unique up to a swap, and
/// the orientation of `M` is free; together these leave two candidate
/// vectors `±q` for the products `s(v) k_v`. The candidate with more
/// positive entries is taken (ties: the one giving fewer negative, then
/// fewer zero, eigenvalues of `H_M`, and finally the one whose first
/// nonzero entry is positive), then the orientation is reversed only if
/// no vertex with positive input charge lands in `P`. The choice depends on the charges
/// only up to a global sign, so `H_M` is unchanged when all charges are
/// negated.
pub fn sign_function(
    g: &GraphManifold,
    class_of: Vec<usize>,
    e0_edges: Vec<usize>,
    factor_edges: Vec<(usize, usize)>,
) -> SignedComponents {
    let n = g.vertex_count();
    let class_count = class_of.iter().map(|&u| u + 1).max().unwrap_or(0);
    let mut classes: Vec<Class> = (0..class_count)
        .map(|_| Class {
            members: Vec::new(),
            sign: Sign::Zero,
        })
        .collect();
    for (v, &u) in class_of.iter().enumerate() {
        classes[u].members.push(v);
        classes[u].sign = Sign::of(g.charge(v));
    }
    let coloring = two_color(class_count, &factor_edges);
    let bipartite = coloring.is_some();
    let all_zero = g.charges().all(|k| k.is_zero());

    let out = SignedComponents {
        classes,
        class_of,
        e0_edges,
        factor_edges,
        bipartite,
        parts: None,
        s: vec![0; n],
        orientation_flipped: false,
        sign_conflict: false,
    };
    let Some(color) = coloring.filter(|_| !all_zero) else {
        return out;
    };

    let q: Vec<i8> = (0..n)
        .map(|v| color[out.class_of[v]] * rational::signum(g.charge(v)))
        .collect();
    let pos = q.iter().filter(|&&x| x > 0).count();
    let neg = q.iter().filter(|&&x| x < 0).count();
    let first: i8 = *q.iter().find(|&&x| x != 0).expect("nonzero charge");
    match pos.cmp(&neg) {
        std::cmp::Ordering::Greater => orient(g, out, &color, &q, 1),
        std::cmp::Ordering::Less => orient(g, out, &color, &q, -1),
        std::cmp::Ordering::Equal => {
            // Break the tie without looking at vertex order: prefer the
            // candidate whose H_M has fewer negative, then fewer zero,
            // eigenvalues.
            let key = |sc: &SignedComponents| {
                crate::linalg::inertia(&crate::linalg::build_hm(g, sc))
                    .map(|i| (i.n_minus, i.n_zero))
                    .ok()
            };
            let plus = orient(g, out.clone(), &color, &q, 1);
            let minus = orient(g, out, &color, &q, -1);
            match key(&plus).cmp(&key(&minus)) {
                std::cmp::Ordering::Less => plus,
                std::cmp::Ordering::Greater => minus,
                std::cmp::Ordering::Equal if first > 0 => plus,
                std::cmp::Ordering::Equal => minus,
            }
        }
    }
}

/// Sets `s = t · color` (up to the orientation reversal) and the parts.
fn orient(
    g: &GraphManifold,
    mut out: SignedComponents,
    color: &[i8],
    q: &[i8],
    t: i8,
) -> SignedComponents {
    let n = g.vertex_count();
    let mut s: Vec<i8> = (0..n).map(|v| t * color[out.class_of[v]]).collect();
    let positive_in_p = (0..n).any(|v| s[v] > 0 && g.charge(v).is_positive());
    out.orientation_flipped = !positive_in_p;
    if out.orientation_flipped {
        s.iter_mut().for_each(|x| *x = -*x);
    }
    out.sign_conflict = (0..n).any(|v| t * q[v] < 0);

    let mut parts = Parts {
        p: Vec::new(),
        n: Vec::new(),
    };
    for u in 0..out.classes.len() {
        let v = out.classes[u].members[0];
        if s[v] > 0 {
            parts.p.push(u);
        } else {
            parts.n.push(u);
        }
    }
    out.s = s;
    out.parts = Some(parts);
    out
}
