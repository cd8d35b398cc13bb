use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::lp::{LinearProgram, LpOutcome, Relation};
use super::{verify_ce, CECertificate, CertificateOrigin, DecisionError, Strictness};
use crate::components::SignedComponents;
use crate::graph::GraphManifold;
use crate::rational::{self, Rational};

/// Weak certificate from a nowhere-zero kernel vector `l` of a positive
/// semidefinite `H_M`: `a_v = |l_v|`, and `γ_e` is `+1` on edges inside `P`
/// classes, `-1` inside `N` classes and `0` on `E₀`. The signs are given for
/// the orientation of `M` used to build `H_M` and negated when that
/// orientation is the reverse of the input one.
pub fn construct_certificate_supersingular(
    g: &GraphManifold,
    sc: &SignedComponents,
    witness: &[Rational],
) -> Result<CECertificate, DecisionError> {
    let orientation: i8 = if sc.orientation_flipped { -1 } else { 1 };
    let gamma: Vec<Rational> = (0..g.edge_count())
        .map(|e| rational::from_int(i64::from(orientation * sc.edge_side(g, e))))
        .collect();
    // all of E in E₀ gives γ ≡ 0, which is strict
    let strictness = if gamma.iter().all(Zero::is_zero) {
        Strictness::Strict
    } else {
        Strictness::Weak
    };
    let cert = CECertificate {
        a: witness.iter().map(Signed::abs).collect(),
        gamma,
        strictness,
        origin: CertificateOrigin::KernelConstruction,
    };
    if verify_ce(g, &cert)? {
        Ok(cert)
    } else {
        Err(DecisionError::VerificationFailed(
            "kernel construction does not solve the compatibility equation".to_owned(),
        ))
    }
}

/// For fixed `a > 0` the compatibility equation is linear in `γ`; returns
/// `γ` minimizing `max |γ_e|` together with that maximum, or `None` when no
/// `γ` solves the equation for this `a`.
pub fn solve_gamma(g: &GraphManifold, a: &[Rational]) -> Option<(Vec<Rational>, Rational)> {
    let m = g.edge_count();
    // variables: γ⁺_e (0..m), γ⁻_e (m..2m), t (2m)
    let n_vars = 2 * m + 1;
    let mut lp = LinearProgram::new(n_vars);
    lp.objective[2 * m] = Rational::one();
    for v in 0..g.vertex_count() {
        let mut row = vec![Rational::zero(); n_vars];
        for w in g.star(v) {
            let c = &a[w.head] / g.edge_b(w.edge);
            row[w.edge] += &c;
            row[m + w.edge] -= c;
        }
        lp.constrain(row, Relation::Eq, g.charge(v) * &a[v]);
    }
    for e in 0..m {
        let mut row = vec![Rational::zero(); n_vars];
        row[e] = Rational::one();
        row[m + e] = Rational::one();
        row[2 * m] = -Rational::one();
        lp.constrain(row, Relation::Le, Rational::zero());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => {
            let gamma: Vec<Rational> = (0..m).map(|e| &x[e] - &x[m + e]).collect();
            let t = gamma
                .iter()
                .map(Signed::abs)
                .max()
                .unwrap_or_else(Rational::zero);
            Some((gamma, t))
        }
        LpOutcome::Infeasible | LpOutcome::Unbounded => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A certificate meeting the requested strictness.
    Found(CECertificate),
    /// Only `|γ| ≤ 1` was reached while `|γ| < 1` was requested.
    WeakOnly(CECertificate),
    NotFound,
}

/// Searches for a strict certificate; see [`search_certificate`].
pub fn search_certificate_strict(g: &GraphManifold, max_iters: usize) -> SearchOutcome {
    search_certificate(g, max_iters, Strictness::Strict)
}

/// Best-effort search over `a`, solving the exact `γ` program for each
/// candidate. Candidates are, in order: the all-ones tuple; rational
/// roundings of `√q` from a floating cutting-plane solution of the convex
/// problem in `q_v = a_v²`, `y_e = γ_e a_v a_v' / b_e` (where `|γ_e| ≤ 1`
/// becomes `b_e |y_e| ≤ √(q_v q_v')`); and finally multiplicative
/// coordinate descent on the best feasible `a`. Every exact linear program
/// counts against `max_iters`; the floating rounds are bounded separately.
pub fn search_certificate(g: &GraphManifold, max_iters: usize, target: Strictness) -> SearchOutcome {
    let mut search = Search {
        g,
        budget: max_iters,
        best: None,
        target,
    };
    search.run();
    let Some((t, a, gamma)) = search.best else {
        return SearchOutcome::NotFound;
    };
    let one = Rational::one();
    let strictness = if t < one {
        Strictness::Strict
    } else if t <= one {
        Strictness::Weak
    } else {
        return SearchOutcome::NotFound;
    };
    let cert = CECertificate {
        a,
        gamma,
        strictness,
        origin: CertificateOrigin::LinearProgram,
    };
    if !matches!(verify_ce(g, &cert), Ok(true)) {
        return SearchOutcome::NotFound;
    }
    if target == Strictness::Strict && strictness == Strictness::Weak {
        SearchOutcome::WeakOnly(cert)
    } else {
        SearchOutcome::Found(cert)
    }
}

struct Search<'g> {
    g: &'g GraphManifold,
    budget: usize,
    best: Option<(Rational, Vec<Rational>, Vec<Rational>)>,
    target: Strictness,
}

impl Search<'_> {
    fn done(&self) -> bool {
        let one = Rational::one();
        match (&self.best, self.target) {
            (Some((t, ..)), Strictness::Strict) => *t < one,
            (Some((t, ..)), Strictness::Weak) => *t <= one,
            (None, _) => false,
        }
    }

    fn spend(&mut self) -> bool {
        if self.budget == 0 || self.done() {
            return false;
        }
        self.budget -= 1;
        true
    }

    /// Evaluates `a`; returns its optimal `max |γ|` if feasible.
    fn try_a(&mut self, a: Vec<Rational>) -> Option<Rational> {
        if !a.iter().all(Signed::is_positive) || !self.spend() {
            return None;
        }
        let (gamma, t) = solve_gamma(self.g, &a)?;
        if self.best.as_ref().map_or(true, |(bt, ..)| t < *bt) {
            self.best = Some((t.clone(), a, gamma));
        }
        Some(t)
    }

    fn run(&mut self) {
        let n = self.g.vertex_count();
        self.try_a(vec![Rational::one(); n]);
        self.cutting_plane_rounds();
        self.coordinate_descent();
    }

    /// Floating cutting-plane rounds on the convex problem in `(q, y)`;
    /// promising points are rounded to rational `a` and evaluated exactly.
    fn cutting_plane_rounds(&mut self) {
        let g = self.g;
        let mut cuts: Vec<Vec<f64>> = vec![vec![1.0]; g.edge_count()];
        let mut tried: Vec<Vec<Rational>> = Vec::new();
        for round in 0..40 {
            let Some(sol) = solve_square_program(g, &cuts) else {
                return;
            };
            if sol.q.iter().any(|&x| x <= 0.0) || !sol.mu.is_finite() {
                return;
            }
            let mut added = false;
            let mut gap = 0.0f64;
            for (e, edge_cuts) in cuts.iter_mut().enumerate() {
                let (u, v) = g.ends(e);
                if u == v {
                    continue;
                }
                let b = rational::to_f64(&g.edge_b(e));
                let true_bound = (sol.q[u] * sol.q[v]).sqrt();
                gap = gap.max(b * (sol.y[e].abs() + sol.mu) - true_bound);
                let rho = (sol.q[v] / sol.q[u]).sqrt();
                if edge_cuts.iter().all(|r| ((r - rho) / rho).abs() > 1e-9) {
                    edge_cuts.push(rho);
                    added = true;
                }
            }
            let last = !added || round == 39;
            if gap <= sol.mu / 2.0 || last {
                for a in round_candidates(&sol.q) {
                    if tried.contains(&a) {
                        continue;
                    }
                    tried.push(a.clone());
                    if let Some(fixed) = repair_bipartite(g, &a) {
                        self.try_a(fixed);
                    }
                    self.try_a(a);
                    if self.done() || self.budget == 0 {
                        return;
                    }
                }
            }
            if last {
                return;
            }
        }
    }

    fn coordinate_descent(&mut self) {
        let factors: Vec<Rational> = [(2, 1), (1, 2), (3, 2), (2, 3), (5, 4), (4, 5), (9, 8), (8, 9)]
            .iter()
            .map(|&(p, q)| rational::frac(p, q))
            .collect();
        loop {
            let Some((start_t, start_a, _)) = self.best.clone() else {
                return;
            };
            for v in 0..start_a.len() {
                for f in &factors {
                    let (cur_t, mut a) = match &self.best {
                        Some((t, a, _)) => (t.clone(), a.clone()),
                        None => return,
                    };
                    a[v] *= f;
                    match self.try_a(a) {
                        Some(t) if t < cur_t => break,
                        _ if self.budget == 0 || self.done() => return,
                        _ => {}
                    }
                }
            }
            if self.best.as_ref().map_or(true, |(t, ..)| *t >= start_t) {
                return;
            }
        }
    }
}

struct SquareSolution {
    q: Vec<f64>,
    y: Vec<f64>,
    mu: f64,
}

/// Maximizes a margin `μ` over `q ≥ μ`, `Σ q = 1`,
/// `k_v q_v = Σ_{w ∈ ∂v} y_e`, and, for each edge `e = (u, v)` and each
/// cut `ρ` of `e`, `b_e (|y_e| + μ) ≤ (ρ q_u + q_v / ρ) / 2` (for a loop,
/// `b_e (|y_e| + μ) ≤ q_u`). By AM-GM the cuts are supporting planes of
/// `b_e |y_e| ≤ √(q_u q_v)`, which is `|γ_e| ≤ 1` after `a = √q` and
/// `y_e = γ_e a_u a_v / b_e`; the program is an outer approximation that
/// tightens as cuts at `ρ = √(q_v / q_u)` are added. Solved in floating
/// point: it only proposes candidates for the exact check.
fn solve_square_program(g: &GraphManifold, cuts: &[Vec<f64>]) -> Option<SquareSolution> {
    let n = g.vertex_count();
    let m = g.edge_count();
    // variables: q (0..n), y⁺ (n..n+m), y⁻ (n+m..n+2m), μ (n+2m)
    let n_vars = n + 2 * m + 1;
    let mu = n + 2 * m;
    let mut lp: LinearProgram<f64> = LinearProgram::new(n_vars);
    lp.objective[mu] = -1.0;
    let zero_row = || vec![0.0f64; n_vars];

    let mut row = zero_row();
    row[..n].iter_mut().for_each(|x| *x = 1.0);
    lp.constrain(row, Relation::Eq, 1.0);
    for v in 0..n {
        let mut row = zero_row();
        row[v] = rational::to_f64(g.charge(v));
        for w in g.star(v) {
            row[n + w.edge] -= 1.0;
            row[n + m + w.edge] += 1.0;
        }
        lp.constrain(row, Relation::Eq, 0.0);
        let mut row = zero_row();
        row[v] = 1.0;
        row[mu] = -1.0;
        lp.constrain(row, Relation::Ge, 0.0);
    }
    for e in 0..m {
        let (u, v) = g.ends(e);
        let b = rational::to_f64(&g.edge_b(e));
        let planes: Vec<Vec<(usize, f64)>> = if u == v {
            vec![vec![(u, 1.0)]]
        } else {
            cuts[e]
                .iter()
                .map(|rho| vec![(u, rho / 2.0), (v, 0.5 / rho)])
                .collect()
        };
        for plane in planes {
            let mut row = zero_row();
            row[n + e] = b;
            row[n + m + e] = b;
            row[mu] = b;
            for (x, coeff) in plane {
                row[x] -= coeff;
            }
            lp.constrain(row, Relation::Le, 0.0);
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => Some(SquareSolution {
            q: x[..n].to_vec(),
            y: (0..m).map(|e| x[n + e] - x[n + m + e]).collect(),
            mu: x[mu],
        }),
        _ => None,
    }
}

/// Rational approximations of `√q`, scaled so the smallest entry is 1,
/// with growing denominators.
fn round_candidates(q: &[f64]) -> Vec<Vec<Rational>> {
    let min = q.iter().cloned().fold(f64::INFINITY, f64::min);
    let a: Vec<f64> = q.iter().map(|x| (x / min).sqrt()).collect();
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for den in [1i64, 2, 4, 10, 100, 1000, 100_000] {
        let cand: Vec<Rational> = a
            .iter()
            .map(|x| rational::frac(((x * den as f64).round() as i64).max(1), den))
            .collect();
        if !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// Exact square root when `x` is a square of a rational, otherwise
/// `⌊√x · 10^digits⌋ / 10^digits` (at least `10^-digits`).
fn sqrt_approx(x: &Rational, digits: u32) -> Rational {
    let (p, q) = (x.numer(), x.denom());
    let (sp, sq) = (p.sqrt(), q.sqrt());
    if &(&sp * &sp) == p && &(&sq * &sq) == q {
        return Rational::new(sp, sq);
    }
    let scale = BigInt::from(10u32).pow(digits.max(1));
    let scaled = (x * Rational::from_integer(&scale * &scale)).floor().to_integer();
    let root = scaled.sqrt().max(BigInt::one());
    Rational::new(root, scale)
}

/// On a bipartite dual graph with sides `X`, `Y` the equation is solvable in
/// `γ` only if `Σ_X k_v a_v² = Σ_Y k_v a_v²`. Tries to restore this by
/// changing a single coordinate to an exact rational square root.
fn repair_bipartite(g: &GraphManifold, a: &[Rational]) -> Option<Vec<Rational>> {
    let n = g.vertex_count();
    let mut side = vec![0i8; n];
    side[0] = 1;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for w in g.star(x) {
            if side[w.head] == 0 {
                side[w.head] = -side[x];
                stack.push(w.head);
            } else if side[w.head] == side[x] {
                return None;
            }
        }
    }
    let term = |v: usize| g.charge(v) * &a[v] * &a[v] * rational::from_int(i64::from(side[v]));
    let total: Rational = (0..n).map(term).sum();
    if total.is_zero() {
        return None;
    }
    (0..n).find_map(|j| {
        let kj = g.charge(j) * rational::from_int(i64::from(side[j]));
        if kj.is_zero() {
            return None;
        }
        let target = -(&total - term(j)) / kj;
        if !target.is_positive() {
            return None;
        }
        let root = sqrt_approx(&target, 0);
        if &root * &root != target {
            return None;
        }
        let mut fixed = a.to_vec();
        fixed[j] = root;
        Some(fixed)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, GraphManifoldData, Vertex};
    use crate::rational::{frac, from_int};

    fn manifold(charges: &[Rational], edges: &[(usize, usize, i64)]) -> GraphManifold {
        GraphManifold::new(GraphManifoldData {
            vertices: charges
                .iter()
                .enumerate()
                .map(|(i, k)| Vertex {
                    id: format!("v{i}").as_str().into(),
                    charge: k.clone(),
                })
                .collect(),
            edges: edges
                .iter()
                .enumerate()
                .map(|(i, &(a, b, bb))| {
                    Edge::new(&format!("e{i}"), &format!("v{a}"), &format!("v{b}"), bb)
                })
                .collect(),
        })
        .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| from_int(x)).collect()
    }

    #[test]
    fn lp_single_loop_zero_charge() {
        let g = manifold(&ints(&[0]), &[(0, 0, 1)]);
        let (gamma, t) = solve_gamma(&g, &ints(&[1])).unwrap();
        assert_eq!(gamma, ints(&[0]));
        assert_eq!(t, from_int(0));
    }

    #[test]
    fn lp_loop_plus_edge() {
        let g = manifold(&ints(&[0, 0]), &[(0, 1, 1), (0, 0, 1)]);
        let (gamma, t) = solve_gamma(&g, &ints(&[1, 1])).unwrap();
        assert_eq!(gamma, ints(&[0, 0]));
        assert_eq!(t, from_int(0));
    }

    #[test]
    fn lp_minimizes_max_gamma() {
        // k = 1 at a vertex with two loops of b = 1: 1 = 2γ1 + 2γ2, optimum 1/4
        let g = manifold(&ints(&[1]), &[(0, 0, 1), (0, 0, 1)]);
        let (gamma, t) = solve_gamma(&g, &ints(&[1])).unwrap();
        assert_eq!(t, frac(1, 4));
        assert_eq!(gamma, vec![frac(1, 4), frac(1, 4)]);
    }

    #[test]
    fn strict_search_needs_nontrivial_a() {
        // k = (1/2, 2), one edge b = 1: k1 a1 = γ a2 and k2 a2 = γ a1 give
        // γ² = k1 k2 = 1 and a1 / a2 = 2, so only a weak solution exists.
        let g = manifold(&[frac(1, 2), from_int(2)], &[(0, 1, 1)]);
        match search_certificate_strict(&g, 50) {
            SearchOutcome::WeakOnly(c) => {
                assert_eq!(c.max_abs_gamma(), from_int(1));
                assert_eq!(&c.a[0] / &c.a[1], from_int(2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn strict_search_tree_with_rational_ratio() {
        // k = (1/8, 2): γ² = 1/4 and a1 / a2 = 4.
        let g = manifold(&[frac(1, 8), from_int(2)], &[(0, 1, 1)]);
        match search_certificate_strict(&g, 50) {
            SearchOutcome::Found(c) => {
                assert_eq!(c.strictness, Strictness::Strict);
                assert_eq!(c.max_abs_gamma(), frac(1, 2));
                assert!(verify_ce(&g, &c).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn strict_search_irrational_ratio_fails_cleanly() {
        // k = (1/2, 1): a1/a2 = √2, no rational solution.
        let g = manifold(&[frac(1, 2), from_int(1)], &[(0, 1, 1)]);
        assert_eq!(search_certificate_strict(&g, 30), SearchOutcome::NotFound);
    }

    #[test]
    fn sqrt_helper() {
        assert_eq!(sqrt_approx(&frac(9, 16), 4), frac(3, 4));
        assert_eq!(sqrt_approx(&from_int(2), 2), frac(141, 100));
    }
}
