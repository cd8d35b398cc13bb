//! Self-test harness: worked examples, the exhaustive micro-suite and
//! seeded random instances, each checked against independent
//! recomputations.
//!
//! Every violation carries the offending instance as a reduced manifest so
//! it can be replayed with `graphmfd analyze`.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use super::generate::{generate, GenerateParams};
use super::manifest::Manifest;
use super::suite::{self, SuiteConfig};
use crate::components::SignedComponents;
use crate::decision::{ce_residuals, decide_manifold, AnalysisReport, DecideOptions, Strictness};
use crate::graph::{Edge, GraphManifold, GraphManifoldData, Vertex};
use crate::linalg::{self, Inertia, RationalMatrix};
use crate::rational::{self, frac, from_int, Rational};

/// The `H_M` builder under test; replaceable for mutation runs.
pub type HmBuilder = fn(&GraphManifold, &SignedComponents) -> RationalMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub check: String,
    pub detail: String,
    /// Reduced manifest of the failing instance.
    pub manifest: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SelftestSummary {
    pub instances: usize,
    pub violations: Vec<Violation>,
}

impl SelftestSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn absorb(&mut self, other: SelftestSummary) {
        self.instances += other.instances;
        self.violations.extend(other.violations);
    }
}

/// Expected outcome of a worked example.
#[derive(Debug, Clone)]
pub struct WorkedExample {
    pub name: &'static str,
    pub data: GraphManifoldData,
    pub hm: Vec<Vec<Rational>>,
    pub verdict_npc: bool,
    pub verdict_vf: bool,
    pub supersingular: bool,
    /// `(a, γ, strictness)` when a certificate is expected.
    pub certificate: Option<(Vec<Rational>, Vec<Rational>, Strictness)>,
}

fn vertex(id: &str, k: i64) -> Vertex {
    Vertex {
        id: id.into(),
        charge: from_int(k),
    }
}

fn pair(k: (i64, i64), b: i64) -> GraphManifoldData {
    GraphManifoldData {
        vertices: vec![vertex("v0", k.0), vertex("v1", k.1)],
        edges: vec![Edge::new("e0", "v0", "v1", b)],
    }
}

fn loop_at(k: i64) -> GraphManifoldData {
    GraphManifoldData {
        vertices: vec![vertex("v0", k)],
        edges: vec![Edge::new("e0", "v0", "v0", 1)],
    }
}

pub fn worked_examples() -> Vec<WorkedExample> {
    let q = from_int;
    vec![
        WorkedExample {
            name: "A",
            data: pair((1, -1), 1),
            hm: vec![vec![q(1), q(0)], vec![q(0), q(1)]],
            verdict_npc: false,
            verdict_vf: false,
            supersingular: false,
            certificate: None,
        },
        WorkedExample {
            name: "B",
            data: pair((1, 1), 2),
            hm: vec![vec![q(1), frac(-1, 2)], vec![frac(-1, 2), q(1)]],
            verdict_npc: false,
            verdict_vf: false,
            supersingular: false,
            certificate: None,
        },
        WorkedExample {
            name: "C",
            data: pair((1, 1), 1),
            hm: vec![vec![q(1), q(-1)], vec![q(-1), q(1)]],
            verdict_npc: false,
            verdict_vf: true,
            supersingular: true,
            certificate: Some((vec![q(1), q(1)], vec![q(1)], Strictness::Weak)),
        },
        WorkedExample {
            name: "D",
            data: loop_at(0),
            hm: vec![vec![q(-2)]],
            verdict_npc: true,
            verdict_vf: true,
            supersingular: false,
            certificate: Some((vec![q(1)], vec![q(0)], Strictness::Strict)),
        },
        WorkedExample {
            name: "E",
            data: loop_at(4),
            hm: vec![vec![q(2)]],
            verdict_npc: false,
            verdict_vf: false,
            supersingular: false,
            certificate: None,
        },
        WorkedExample {
            name: "F",
            data: loop_at(2),
            hm: vec![vec![q(0)]],
            verdict_npc: false,
            verdict_vf: true,
            supersingular: true,
            certificate: Some((vec![q(1)], vec![q(1)], Strictness::Weak)),
        },
    ]
}

struct Checker<'a> {
    data: &'a GraphManifoldData,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn fail(&mut self, check: &str, detail: impl Into<String>) {
        self.out.push(Violation {
            check: check.to_owned(),
            detail: detail.into(),
            manifest: Manifest::reduced(self.data.clone()).to_json(),
        });
    }

    fn expect(&mut self, ok: bool, check: &str, detail: impl FnOnce() -> String) {
        if !ok {
            let d = detail();
            self.fail(check, d);
        }
    }
}

/// Vertex classes under `k_v k_v' > 0` adjacency, found by BFS.
fn oracle_classes(g: &GraphManifold) -> Vec<usize> {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for w in g.star(x) {
                let y = w.head;
                if label[y] == usize::MAX && (g.charge(x) * g.charge(y)).is_positive() {
                    label[y] = next;
                    queue.push_back(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// `H_M` straight from its definition, for a given sign function.
fn oracle_hm(g: &GraphManifold, s: &[i8], flipped: bool) -> RationalMatrix {
    let n = g.vertex_count();
    let mut h = RationalMatrix::zeros(n);
    for v in 0..n {
        let mut k = g.charge(v).clone();
        if flipped {
            k = -k;
        }
        let mut d = from_int(i64::from(s[v])) * k;
        for e in &g.data().edges {
            if e.is_loop() && e.ends[0] == g.vertex(v).id {
                d -= frac(2, e.b);
            }
        }
        h.set(v, v, d);
        for w in 0..n {
            if w == v || !(g.charge(v) * g.charge(w)).is_positive() {
                continue;
            }
            let mut x = Rational::zero();
            for e in &g.data().edges {
                let (a, b) = (&e.ends[0], &e.ends[1]);
                let (iv, iw) = (&g.vertex(v).id, &g.vertex(w).id);
                if (a == iv && b == iw) || (a == iw && b == iv) {
                    x -= frac(1, e.b);
                }
            }
            h.set(v, w, x);
        }
    }
    h
}

/// Sign counts from a floating eigen-decomposition, or `None` when some
/// eigenvalue is not clearly separated from the zero threshold `eps`, that
/// is, when `eps ≤ |λ| ≤ eps + margin`. Eigenvalues below `eps` count as
/// zero.
pub fn float_inertia(h: &RationalMatrix, eps: f64, margin: f64) -> Option<Inertia> {
    let n = h.dim();
    let m = DMatrix::from_fn(n, n, |i, j| rational::to_f64(h.get(i, j)));
    let eig = m.symmetric_eigen();
    let mut out = Inertia::new(0, 0, 0);
    for &l in eig.eigenvalues.iter() {
        let a = l.abs();
        if a >= eps && a <= eps + margin {
            return None;
        }
        if a < eps {
            out.n_zero += 1;
        } else if l > 0.0 {
            out.n_plus += 1;
        } else {
            out.n_minus += 1;
        }
    }
    Some(out)
}

fn check_components(c: &mut Checker<'_>, g: &GraphManifold, sc: &SignedComponents) {
    let oracle = oracle_classes(g);
    let n = g.vertex_count();
    let same_partition = (0..n)
        .all(|i| (0..n).all(|j| (oracle[i] == oracle[j]) == (sc.class_of[i] == sc.class_of[j])));
    c.expect(same_partition, "signed classes", || {
        format!("library {:?} vs BFS {:?}", sc.class_of, oracle)
    });
    let oriented = |v: usize| {
        let k = g.charge(v).clone();
        if sc.orientation_flipped {
            -k
        } else {
            k
        }
    };
    let all_zero = g.charges().all(Zero::is_zero);
    if sc.bipartite && !all_zero {
        c.expect(sc.s.iter().all(|&x| x == 1 || x == -1), "sign function", || {
            format!("s = {:?} should be ±1", sc.s)
        });
        for &e in &sc.e0_edges {
            let (a, b) = g.ends(e);
            c.expect(sc.s[a] == -sc.s[b], "sign function", || {
                format!("E0 edge {} joins equal signs", g.edge(e).id)
            });
        }
        c.expect(
            (0..n).any(|v| sc.s[v] > 0 && oriented(v).is_positive()),
            "orientation",
            || "no positive charge on the P side".to_owned(),
        );
        let conflict = (0..n).any(|v| (from_int(i64::from(sc.s[v])) * oriented(v)).is_negative());
        c.expect(conflict == sc.sign_conflict, "sign conflict flag", || {
            format!("flag {} but recomputed {}", sc.sign_conflict, conflict)
        });
    } else {
        c.expect(sc.s.iter().all(|&x| x == 0), "sign function", || {
            format!("s = {:?} should vanish", sc.s)
        });
    }
}

fn check_report(c: &mut Checker<'_>, g: &GraphManifold, r: &AnalysisReport, hm: &RationalMatrix) {
    let sc = &r.components;
    check_components(c, g, sc);
    let oracle = oracle_hm(g, &sc.s, sc.orientation_flipped);
    c.expect(hm.rows().eq(oracle.rows()), "H_M definition", || {
        format!("built {hm} but definition gives {oracle}")
    });
    let inertia = match linalg::inertia(hm) {
        Ok(i) => i,
        Err(e) => {
            c.fail("H_M symmetric", e.to_string());
            return;
        }
    };
    if let Some(fi) = float_inertia(hm, 1e-9, 1e-6) {
        c.expect(fi == inertia, "inertia vs float", || {
            format!("exact {inertia:?}, float {fi:?}")
        });
    }
    let zero = hm.is_zero();
    let witness = linalg::supersingular_witness(hm);
    let npc = inertia.n_minus > 0 || (zero && sc.s.iter().all(|&x| x == 0));
    let vf = inertia.n_minus > 0 || witness.is_some();
    c.expect(r.verdict_npc == npc, "NPC verdict", || {
        format!("reported {} but H gives {}", r.verdict_npc, npc)
    });
    c.expect(r.verdict_vf == vf, "VF verdict", || {
        format!("reported {} but H gives {}", r.verdict_vf, vf)
    });
    c.expect(!r.verdict_npc || r.verdict_vf, "NPC implies VF", || {
        "NPC without VF".to_owned()
    });
    if let Some(l) = &r.kernel_witness {
        let hl = hm.mul_vec(l);
        c.expect(
            hl.iter().all(Zero::is_zero) && l.iter().all(|x| !x.is_zero()),
            "kernel witness",
            || "witness is not a nowhere-zero kernel vector".to_owned(),
        );
    }
    if let Some(cert) = &r.certificate {
        let res = ce_residuals(g, &cert.a, &cert.gamma);
        let positive = cert.a.iter().all(Signed::is_positive);
        let one = Rational::one();
        let bounded = cert.gamma.iter().all(|x| match cert.strictness {
            Strictness::Strict => x.abs() < one,
            Strictness::Weak => x.abs() <= one,
        });
        c.expect(
            positive && bounded && res.iter().all(Zero::is_zero),
            "certificate",
            || format!("{} certificate does not solve CE", cert.strictness.as_str()),
        );
    }
    if let Some(cert) = &r.certificate {
        c.expect(
            cert.strictness != Strictness::Strict || r.verdict_npc,
            "strict certificate implies NPC",
            || "strict solution of CE on an instance judged not NPC".to_owned(),
        );
    }
    if inertia.n_minus == 0 && vf {
        c.expect(r.certificate.is_some(), "supersingular certificate", || {
            "no weak certificate in the supersingular branch".to_owned()
        });
    }
    // H_M is unchanged by global negation of the charges
    let neg = g.negated();
    let hneg = linalg::build_hm(&neg, &SignedComponents::compute(&neg));
    c.expect(hneg.rows().eq(r.hm.rows()), "negation invariance", || {
        format!("H(k) = {} but H(-k) = {hneg}", r.hm)
    });
}

/// Runs every check on one instance, using `build` as the `H_M` builder
/// under test.
pub fn check_instance_with(
    data: &GraphManifoldData,
    opts: &DecideOptions,
    build: HmBuilder,
) -> Vec<Violation> {
    let mut c = Checker {
        data,
        out: Vec::new(),
    };
    let g = match GraphManifold::new(data.clone()) {
        Ok(g) => g,
        Err(e) => {
            c.fail("validation", e.to_string());
            return c.out;
        }
    };
    let report = match decide_manifold(&g, opts) {
        Ok(r) => r,
        Err(e) => {
            c.fail("decide", e.to_string());
            return c.out;
        }
    };
    let hm = build(&g, &report.components);
    check_report(&mut c, &g, &report, &hm);

    // reversing vertex and edge order must not change the verdicts
    let mut rev = data.clone();
    rev.vertices.reverse();
    rev.edges.reverse();
    match GraphManifold::new(rev).map(|g| decide_manifold(&g, opts)) {
        Ok(Ok(r2)) => c.expect(
            r2.verdict_npc == report.verdict_npc
                && r2.verdict_vf == report.verdict_vf
                && r2.inertia == report.inertia,
            "relabeling invariance",
            || "verdicts change when vertices and edges are reordered".to_owned(),
        ),
        _ => c.fail("relabeling invariance", "reordered instance failed"),
    }
    c.out
}

pub fn check_instance(data: &GraphManifoldData, opts: &DecideOptions) -> Vec<Violation> {
    check_instance_with(data, opts, linalg::build_hm)
}

/// Checks the worked examples against their expected values.
pub fn check_worked_examples(build: HmBuilder) -> SelftestSummary {
    let mut summary = SelftestSummary::default();
    let opts = DecideOptions::default();
    for ex in worked_examples() {
        summary.instances += 1;
        let mut c = Checker {
            data: &ex.data,
            out: Vec::new(),
        };
        let g = GraphManifold::new(ex.data.clone()).expect("worked examples are valid");
        match decide_manifold(&g, &opts) {
            Ok(r) => {
                let hm = build(&g, &r.components);
                let want = RationalMatrix::from_rows(ex.hm.clone());
                c.expect(hm.rows().eq(want.rows()), "worked example H_M", || {
                    format!("example {}: got {hm}, expected {want}", ex.name)
                });
                c.expect(
                    r.verdict_npc == ex.verdict_npc
                        && r.verdict_vf == ex.verdict_vf
                        && r.supersingular == ex.supersingular,
                    "worked example verdicts",
                    || format!("example {}", ex.name),
                );
                let got = r
                    .certificate
                    .as_ref()
                    .map(|c| (c.a.clone(), c.gamma.clone(), c.strictness));
                c.expect(got == ex.certificate, "worked example certificate", || {
                    format!("example {}: got {got:?}", ex.name)
                });
                check_report(&mut c, &g, &r, &hm);
            }
            Err(e) => c.fail("decide", format!("example {}: {e}", ex.name)),
        }
        summary.violations.extend(c.out);
    }
    summary
}

fn check_all<I>(instances: I, opts: &DecideOptions, build: HmBuilder) -> SelftestSummary
where
    I: IntoIterator<Item = GraphManifoldData>,
{
    use rayon::prelude::*;
    let items: Vec<GraphManifoldData> = instances.into_iter().collect();
    let violations: Vec<Violation> = items
        .par_iter()
        .flat_map_iter(|d| check_instance_with(d, opts, build))
        .collect();
    SelftestSummary {
        instances: items.len(),
        violations,
    }
}

/// Breadth 0: worked examples only. Breadth 1: plus the micro-suite with
/// at most three edges and 100 random instances. Breadth `n ≥ 2`: the full
/// micro-suite and `250 n` random instances.
pub fn run_selftest_with(breadth: u32, build: HmBuilder) -> SelftestSummary {
    let mut summary = check_worked_examples(build);
    if breadth == 0 {
        return summary;
    }
    let opts = DecideOptions {
        certify: true,
        max_iters: 12,
    };
    let cfg = if breadth == 1 {
        SuiteConfig {
            max_edges: 3,
            ..SuiteConfig::default()
        }
    } else {
        SuiteConfig::default()
    };
    summary.absorb(check_all(suite::instances(&cfg), &opts, build));
    let random = if breadth == 1 { 100 } else { 250 * breadth as u64 };
    let generated = (0..random).map(|seed| {
        let n = 1 + (seed % 7) as usize;
        let m = n - 1 + (seed / 7 % 4) as usize;
        generate(&GenerateParams::new(n, m, seed)).expect("feasible shape")
    });
    summary.absorb(check_all(generated, &opts, build));
    summary
}

pub fn run_selftest(breadth: u32) -> SelftestSummary {
    run_selftest_with(breadth, linalg::build_hm)
}
