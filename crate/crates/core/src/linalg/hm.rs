use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{LinalgError, RationalMatrix};
use crate::components::SignedComponents;
use crate::graph::GraphManifold;
use crate::rational::Rational;

/// Builds `H_M`:
///
/// * `h_vv = s(v) k_v - Σ_{loops e at v} 2 / b_e`
/// * `h_vv' = -Σ_{e joining v, v'} 1 / b_e` when `k_v k_v' > 0`, else 0.
///
/// Rows are labelled by vertex id.
pub fn build_hm(g: &GraphManifold, sc: &SignedComponents) -> RationalMatrix {
    let n = g.vertex_count();
    let mut h = RationalMatrix::zeros(n)
        .with_labels(g.data().vertices.iter().map(|v| v.id.0.clone()).collect());
    for v in 0..n {
        h.set(v, v, sc.signed_charge(g, v));
    }
    for e in 0..g.edge_count() {
        let (a, b) = g.ends(e);
        let inv_b = Rational::new(BigInt::from(1), BigInt::from(g.edge(e).b));
        if a == b {
            h.add_to(a, a, &(-(inv_b * BigInt::from(2))));
        } else if (g.charge(a) * g.charge(b)).is_positive() {
            h.add_to(a, b, &(-inv_b.clone()));
            h.add_to(b, a, &(-inv_b));
        }
    }
    h
}

/// One diagonal block `H_u` of `H_M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub class: usize,
    /// Vertex indices of the class, in row order of `matrix`.
    pub vertices: Vec<usize>,
    pub matrix: RationalMatrix,
}

/// Splits `H` into the principal blocks of the signed classes, after
/// checking that no nonzero entry joins two different classes.
pub fn block_decompose(
    h: &RationalMatrix,
    sc: &SignedComponents,
) -> Result<Vec<Block>, LinalgError> {
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            if sc.class_of[i] != sc.class_of[j] && !h.get(i, j).is_zero() {
                return Err(LinalgError::CrossBlockNonzero(i, j));
            }
        }
    }
    Ok(sc
        .classes
        .iter()
        .enumerate()
        .map(|(u, class)| Block {
            class: u,
            vertices: class.members.clone(),
            matrix: h.principal(&class.members),
        })
        .collect())
}
