//! Seeded random instances.
//!
//! A uniformly random recursive spanning tree is laid down first, then the
//! remaining edges join uniformly random vertex pairs (loops and parallel
//! edges included). The output is a pure function of the parameters.

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::manifest::{Manifest, ManifestBody, SCHEMA_VERSION};
use crate::graph::{Edge, EdgeId, GluingDatum, GraphManifoldData, GraphShape, Vertex, VertexId};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("no connected graph has {vertices} vertices and {edges} edges")]
    InfeasibleShape { vertices: usize, edges: usize },
    #[error("empty range {lo}..{hi} for {what}")]
    EmptyRange { what: &'static str, lo: i64, hi: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerateParams {
    pub vertices: usize,
    pub edges: usize,
    pub seed: u64,
    /// Inclusive charge bounds.
    pub charge_range: (i64, i64),
    /// Charges are drawn from the grid `lo + j / charge_denominator`.
    pub charge_denominator: u32,
    /// Inclusive bounds for `b_e`.
    pub b_range: (i64, i64),
}

impl GenerateParams {
    pub fn new(vertices: usize, edges: usize, seed: u64) -> Self {
        GenerateParams {
            vertices,
            edges,
            seed,
            charge_range: (-2, 2),
            charge_denominator: 2,
            b_range: (1, 3),
        }
    }

    fn check(&self) -> Result<(), GenerateError> {
        if self.vertices == 0 || self.edges + 1 < self.vertices {
            return Err(GenerateError::InfeasibleShape {
                vertices: self.vertices,
                edges: self.edges,
            });
        }
        let (lo, hi) = self.charge_range;
        if lo > hi || self.charge_denominator == 0 {
            return Err(GenerateError::EmptyRange {
                what: "charges",
                lo,
                hi,
            });
        }
        let (lo, hi) = self.b_range;
        if lo > hi || hi < 1 {
            return Err(GenerateError::EmptyRange { what: "b", lo, hi });
        }
        Ok(())
    }
}

/// Endpoint pairs of a random connected multigraph.
fn random_shape(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::with_capacity(m);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        pairs.push((order[j], order[i]));
    }
    while pairs.len() < m {
        pairs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    pairs.shuffle(rng);
    pairs
}

fn shape(rng: &mut ChaCha8Rng, p: &GenerateParams) -> GraphShape {
    let pairs = random_shape(rng, p.vertices, p.edges);
    let vid = |i: usize| VertexId(format!("v{i}"));
    GraphShape {
        vertices: (0..p.vertices).map(vid).collect(),
        edges: pairs
            .into_iter()
            .enumerate()
            .map(|(i, (a, b))| (EdgeId(format!("e{i}")), [vid(a), vid(b)]))
            .collect(),
    }
}

/// Reduced-form instance; always passes validation.
pub fn generate(p: &GenerateParams) -> Result<GraphManifoldData, GenerateError> {
    p.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let shape = shape(&mut rng, p);
    let den = i64::from(p.charge_denominator);
    let (lo, hi) = p.charge_range;
    let (blo, bhi) = (p.b_range.0.max(1), p.b_range.1);
    let vertices = shape
        .vertices
        .into_iter()
        .map(|id| {
            let j = rng.gen_range(0..=(hi - lo) * den);
            Vertex {
                id,
                charge: Rational::new((lo * den + j).into(), den.into()),
            }
        })
        .collect();
    let edges = shape
        .edges
        .into_iter()
        .map(|(id, ends)| Edge {
            id,
            ends,
            b: rng.gen_range(blo..=bhi),
            bw_sign: if rng.gen_bool(0.5) { 1 } else { -1 },
        })
        .collect();
    Ok(GraphManifoldData { vertices, edges })
}

/// A gluing matrix `[[a, b_w], [c, d]]` with determinant −1.
fn random_gluing(rng: &mut ChaCha8Rng, b: i64) -> [[i64; 2]; 2] {
    let bw = if rng.gen_bool(0.5) { b } else { -b };
    let a = loop {
        let a: i64 = rng.gen_range(-3..=3);
        if a.gcd(&bw) == 1 {
            break a;
        }
    };
    // a x + bw y = 1, so a(-x) - bw(y) = -1
    let eg = a.extended_gcd(&bw);
    let (x, y) = if eg.gcd == 1 { (eg.x, eg.y) } else { (-eg.x, -eg.y) };
    let t: i64 = rng.gen_range(-2..=2);
    [[a, bw], [y + t * a, -x + t * bw]]
}

/// Gluing-form instance over the same kind of random shape. Charges come
/// out of the gluing matrices, so `charge_range` is not used.
pub fn generate_gluing(p: &GenerateParams) -> Result<Manifest, GenerateError> {
    p.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let shape = shape(&mut rng, p);
    let (blo, bhi) = (p.b_range.0.max(1), p.b_range.1);
    let gluings = shape
        .edges
        .iter()
        .map(|(id, _)| {
            let b = rng.gen_range(blo..=bhi);
            GluingDatum {
                edge: id.clone(),
                matrix: random_gluing(&mut rng, b),
            }
        })
        .collect();
    Ok(Manifest {
        schema_version: Some(SCHEMA_VERSION),
        body: ManifestBody::Gluing { shape, gluings },
    })
}
