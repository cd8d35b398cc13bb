use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use graphmfd::decision::lp::{LinearProgram, LpOutcome, Relation};
use graphmfd::decision::{decide, verify_ce, DecideOptions};
use graphmfd::io::generate::{generate, GenerateParams};
use graphmfd::io::manifest::{load_manifest, Manifest};
use graphmfd::linalg::{inertia, kernel_basis, RationalMatrix};
use graphmfd::rational;
use graphmfd::{GraphManifold, Rational};

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn symmetric(n: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec((-4i64..=4, 1i64..=3), n * n).prop_map(move |v| {
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let (p, d) = v[i * n + j];
                let x = rational::frac(p, d);
                rows[i][j] = x.clone();
                rows[j][i] = x;
            }
        }
        RationalMatrix::from_rows(rows)
    })
}

/// Product of elementary row operations, hence determinant ±1.
fn unimodular(n: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, any::<bool>()), 0..12).prop_map(move |ops| {
        let mut s: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, c, swap) in ops {
            if swap {
                s.swap(i, j);
            } else if i != j {
                for k in 0..n {
                    s[i][k] += c * s[j][k];
                }
            }
        }
        let rows: Vec<Vec<Rational>> = s.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        RationalMatrix::from_rows(rows)
    })
}

fn matrix_and_transform() -> impl Strategy<Value = (RationalMatrix, RationalMatrix)> {
    (1usize..=6).prop_flat_map(|n| (symmetric(n), unimodular(n)))
}

/// Optimum of a bounded two-variable LP over all vertices of its
/// feasible polygon.
fn brute_force(objective: [i64; 2], cons: &[([i64; 2], i64)]) -> Option<Rational> {
    let mut lines: Vec<([i64; 2], i64)> = cons.to_vec();
    lines.push(([1, 0], 0));
    lines.push(([0, 1], 0));
    let feasible = |x: &[Rational; 2]| {
        !x[0].is_negative() && !x[1].is_negative()
            && cons
                .iter()
                .all(|(c, r)| q(c[0]) * &x[0] + q(c[1]) * &x[1] <= q(*r))
    };
    let mut best: Option<Rational> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let ([a, b], e) = lines[i];
            let ([c, d], f) = lines[j];
            let det = a * d - b * c;
            if det == 0 {
                continue;
            }
            let x = [rational::frac(e * d - b * f, det), rational::frac(a * f - e * c, det)];
            if feasible(&x) {
                let v = q(objective[0]) * &x[0] + q(objective[1]) * &x[1];
                if best.as_ref().map_or(true, |b| v < *b) {
                    best = Some(v);
                }
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inertia_is_a_congruence_invariant((h, s) in matrix_and_transform()) {
        let before = inertia(&h).unwrap();
        let after = inertia(&h.congruent(&s)).unwrap();
        prop_assert_eq!(before, after);
        prop_assert_eq!(before.dim(), h.dim());
    }

    #[test]
    fn kernel_basis_spans_the_zero_eigenspace(h in (1usize..=6).prop_flat_map(symmetric)) {
        let basis = kernel_basis(&h);
        prop_assert_eq!(basis.len(), inertia(&h).unwrap().n_zero);
        for v in &basis {
            prop_assert!(h.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, d in 1i64..500) {
        let x = rational::frac(p, d);
        prop_assert_eq!(rational::parse(&rational::format(&x)).unwrap(), x);
    }

    #[test]
    fn manifests_round_trip(n in 1usize..6, extra in 0usize..4, seed in any::<u64>()) {
        let data = generate(&GenerateParams::new(n, n - 1 + extra, seed)).unwrap();
        let text = Manifest::reduced(data.clone()).to_json();
        prop_assert_eq!(load_manifest(&text).unwrap(), data);
    }

    #[test]
    fn lp_matches_vertex_enumeration(
        objective in [-3i64..=3, -3i64..=3],
        cons in prop::collection::vec(([-3i64..=3, -3i64..=3], -4i64..=6), 0..4),
    ) {
        let mut all = cons.clone();
        all.push(([1, 0], 5));
        all.push(([0, 1], 5));
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![q(objective[0]), q(objective[1])];
        for (c, r) in &all {
            lp.constrain(vec![q(c[0]), q(c[1])], Relation::Le, q(*r));
        }
        match (lp.solve(), brute_force(objective, &all)) {
            (LpOutcome::Optimal { x, value }, Some(best)) => {
                prop_assert!(lp.is_feasible(&x));
                prop_assert_eq!(value, best);
            }
            (LpOutcome::Infeasible, None) => {}
            (got, want) => prop_assert!(false, "lp {:?} vs brute force {:?}", got, want),
        }
    }

    #[test]
    fn random_manifolds_are_consistent(n in 1usize..7, extra in 0usize..4, seed in any::<u64>()) {
        let data = generate(&GenerateParams::new(n, n - 1 + extra, seed)).unwrap();
        let opts = DecideOptions { certify: true, max_iters: 20 };
        let r = decide(&data, &opts).unwrap();
        prop_assert!(r.hm.is_symmetric());
        prop_assert!(!r.verdict_npc || r.verdict_vf);
        let g = GraphManifold::new(data).unwrap();
        if let Some(c) = &r.certificate {
            prop_assert!(verify_ce(&g, c).unwrap());
        }
        let neg = decide(g.negated().data(), &opts).unwrap();
        prop_assert_eq!(neg.hm, r.hm);
        prop_assert_eq!((neg.verdict_npc, neg.verdict_vf), (r.verdict_npc, r.verdict_vf));
    }
}
