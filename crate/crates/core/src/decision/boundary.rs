//! Homology classes on the JSJ tori determined by a certificate.
//!
//! For `w = (v, e)` with signed intersection number `b_w` and
//! `γ'_e = sgn(b_w) γ_e`:
//!
//! ```text
//! c⁺_w = (1 + γ'_e) / (2 b_w) · (a_v f_{-w} + a_{e(v)} f_w)
//! c⁻_w = (1 - γ'_e) / (2 b_w) · (a_v f_{-w} - a_{e(v)} f_w)
//! ```
//!
//! Classes are stored as coefficient pairs in the basis `(f_w, f_{-w})` of
//! `H_1(T_e; Q)`, where `f_w ∧_w f_{-w} = b_w` and `∧_{-w} = -∧_w`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CECertificate, DecisionError};
use crate::graph::{GraphManifold, OrientedEdge};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedBoundary {
    pub w: OrientedEdge,
    /// `b_w` for this orientation.
    pub bw: Rational,
    /// Coefficients of `c⁺_w` on `(f_w, f_{-w})`, after scaling.
    pub c_plus: [Rational; 2],
    pub c_minus: [Rational; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryClasses {
    /// Least positive integer making every coefficient integral.
    pub scale: BigInt,
    /// `scale · a`.
    pub scaled_a: Vec<Rational>,
    /// Both orientations of every edge, in edge order.
    pub classes: Vec<OrientedBoundary>,
}

/// `x ∧_w y` for coefficient pairs on `(f_w, f_{-w})`.
fn wedge(bw: &Rational, x: &[Rational; 2], y: &[Rational; 2]) -> Rational {
    bw * (&x[0] * &y[1] - &x[1] * &y[0])
}

/// Coordinates of a class given on `(f_w, f_{-w})` in the basis
/// `(f_{-w}, f_w)` used by the opposite orientation.
fn swap(x: &[Rational; 2]) -> [Rational; 2] {
    [x[1].clone(), x[0].clone()]
}

fn classes_for(
    g: &GraphManifold,
    w: OrientedEdge,
    a: &[Rational],
    gamma: &[Rational],
) -> OrientedBoundary {
    let edge = g.edge(w.edge);
    let bw = rational::from_int(edge.signed_b());
    let gamma_p = &gamma[w.edge] * rational::from_int(i64::from(edge.bw_sign));
    let one = Rational::one();
    let two_b = &bw * rational::from_int(2);
    let (av, ah) = (&a[w.tail], &a[w.head]);
    let plus = (&one + &gamma_p) / &two_b;
    let minus = (&one - &gamma_p) / &two_b;
    OrientedBoundary {
        w,
        c_plus: [&plus * ah, &plus * av],
        c_minus: [-(&minus * ah), &minus * av],
        bw,
    }
}

/// Computes `c_w^±` for every oriented edge, scales `a` to make them
/// integral, and checks
///
/// 1. `f_w ∧_w c_w = a_v` for every `w ∈ ∂v`, where `c_w = c⁺_w + c⁻_w`;
/// 2. `Σ_{w ∈ ∂v} (f_{-w} / b_w) ∧_{-w} c_w = k_v a_v`;
///
/// and the symmetry `c⁺_{-w} = c⁺_w`, `c⁻_{-w} = -c⁻_w`.
pub fn boundary_classes(
    g: &GraphManifold,
    cert: &CECertificate,
) -> Result<BoundaryClasses, DecisionError> {
    let unscaled: Vec<OrientedBoundary> = (0..g.edge_count())
        .flat_map(|e| {
            let (tail, head) = g.ends(e);
            let w = OrientedEdge {
                edge: e,
                tail,
                head,
                reversed: false,
            };
            [w, w.opposite()]
        })
        .map(|w| classes_for(g, w, &cert.a, &cert.gamma))
        .collect();
    let scale = rational::lcm_of_denominators(
        unscaled
            .iter()
            .flat_map(|c| c.c_plus.iter().chain(c.c_minus.iter())),
    );
    let factor = Rational::from_integer(scale.clone());
    let scaled_a: Vec<Rational> = cert.a.iter().map(|x| x * &factor).collect();
    let classes: Vec<OrientedBoundary> = unscaled
        .into_iter()
        .map(|c| OrientedBoundary {
            c_plus: [&c.c_plus[0] * &factor, &c.c_plus[1] * &factor],
            c_minus: [&c.c_minus[0] * &factor, &c.c_minus[1] * &factor],
            ..c
        })
        .collect();

    let out = BoundaryClasses {
        scale,
        scaled_a,
        classes,
    };
    check_identities(g, &out)?;
    Ok(out)
}

fn check_identities(g: &GraphManifold, bc: &BoundaryClasses) -> Result<(), DecisionError> {
    let f_near = [Rational::one(), Rational::zero()];
    let f_far = [Rational::zero(), Rational::one()];
    for c in &bc.classes {
        if !c.c_plus.iter().chain(&c.c_minus).all(|x| x.is_integer()) {
            return Err(DecisionError::IdentityViolation(format!(
                "edge {}: scaled class is not integral",
                g.edge(c.w.edge).id
            )));
        }
    }
    for pair in bc.classes.chunks(2) {
        let (w, opp) = (&pair[0], &pair[1]);
        let neg_minus = [-opp.c_minus[0].clone(), -opp.c_minus[1].clone()];
        if swap(&opp.c_plus) != w.c_plus || swap(&neg_minus) != w.c_minus {
            return Err(DecisionError::IdentityViolation(format!(
                "edge {}: classes of opposite orientations disagree",
                g.edge(w.w.edge).id
            )));
        }
    }
    for v in 0..g.vertex_count() {
        let mut second = Rational::zero();
        for c in bc.classes.iter().filter(|c| c.w.tail == v) {
            let cw = [&c.c_plus[0] + &c.c_minus[0], &c.c_plus[1] + &c.c_minus[1]];
            let first = wedge(&c.bw, &f_near, &cw);
            if first != bc.scaled_a[v] {
                return Err(DecisionError::IdentityViolation(format!(
                    "vertex {}: f_w ∧ c_w = {} but a_v = {}",
                    g.vertex(v).id,
                    rational::format(&first),
                    rational::format(&bc.scaled_a[v])
                )));
            }
            let f_far_over_b = [Rational::zero(), f_far[1].clone() / &c.bw];
            // ∧_{-w} = -∧_w
            second += -wedge(&c.bw, &f_far_over_b, &cw);
        }
        let want = g.charge(v) * &bc.scaled_a[v];
        if second != want {
            return Err(DecisionError::IdentityViolation(format!(
                "vertex {}: Σ (f_-w / b_w) ∧ c_w = {} but k_v a_v = {}",
                g.vertex(v).id,
                rational::format(&second),
                rational::format(&want)
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{CertificateOrigin, Strictness};
    use crate::graph::{Edge, GraphManifoldData, Vertex};
    use crate::rational::{frac, from_int};

    fn pair(k: (i64, i64), b: i64, sign: i8) -> GraphManifold {
        let mut e = Edge::new("e", "v0", "v1", b);
        e.bw_sign = sign;
        GraphManifold::new(GraphManifoldData {
            vertices: vec![
                Vertex {
                    id: "v0".into(),
                    charge: from_int(k.0),
                },
                Vertex {
                    id: "v1".into(),
                    charge: from_int(k.1),
                },
            ],
            edges: vec![e],
        })
        .unwrap()
    }

    fn cert(a: Vec<Rational>, gamma: Vec<Rational>) -> CECertificate {
        CECertificate {
            a,
            gamma,
            strictness: Strictness::Weak,
            origin: CertificateOrigin::LinearProgram,
        }
    }

    #[test]
    fn unit_example() {
        let g = pair((1, 1), 1, 1);
        let bc = boundary_classes(&g, &cert(vec![from_int(1); 2], vec![from_int(1)])).unwrap();
        assert_eq!(bc.scale, BigInt::from(1));
        assert_eq!(bc.classes[0].c_plus, [from_int(1), from_int(1)]);
        assert_eq!(bc.classes[0].c_minus, [from_int(0), from_int(0)]);
    }

    #[test]
    fn e0_edge_halves() {
        // γ = 0 on an edge between zero-charge blocks: c± = (1/2b)(a f_-w ± a f_w)
        let g = pair((0, 0), 1, 1);
        let bc = boundary_classes(&g, &cert(vec![from_int(1); 2], vec![from_int(0)])).unwrap();
        assert_eq!(bc.scale, BigInt::from(2));
        assert_eq!(bc.classes[0].c_plus, [from_int(1), from_int(1)]);
        assert_eq!(bc.classes[0].c_minus, [from_int(-1), from_int(1)]);
        assert_eq!(bc.scaled_a, vec![from_int(2), from_int(2)]);
    }

    #[test]
    fn sign_of_bw_cancels() {
        for sign in [1, -1] {
            let g = pair((1, 1), 1, sign);
            let bc = boundary_classes(&g, &cert(vec![from_int(1); 2], vec![from_int(1)])).unwrap();
            assert_eq!(bc.scaled_a, vec![from_int(1); 2]);
        }
    }

    #[test]
    fn broken_certificate_is_rejected() {
        let g = pair((1, 1), 1, 1);
        let err = boundary_classes(&g, &cert(vec![from_int(1); 2], vec![frac(1, 2)])).unwrap_err();
        assert!(matches!(err, DecisionError::IdentityViolation(_)));
    }
}
