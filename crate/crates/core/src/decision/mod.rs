//! Verdicts and certificates.
//!
//! The verdicts rest on `H_M` alone:
//!
//! * a non-positively curved metric exists iff `H_M` has a negative
//!   eigenvalue, or `H_M` is zero and the sign function `s` vanishes
//!   (a zero `H_M` produced by self-loops at charged vertices admits no
//!   strict solution of the compatibility equation);
//! * `M` is virtually fibered iff `H_M` has a negative eigenvalue or is
//!   supersingular (annihilates a tuple with no zero entry).
//!
//! Certificates are solutions `{a, γ}` of the compatibility equation
//! `k_v a_v = Σ_{w=(v,e) ∈ ∂v} γ_e a_{e(v)} / b_e` with `a > 0` and
//! `|γ| < 1` (strict) or `|γ| ≤ 1` (weak). They are supplementary evidence
//! and are always verified exactly before being reported.

mod boundary;
mod certify;
pub mod lp;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::components::SignedComponents;
use crate::graph::{GraphManifold, GraphManifoldData, ValidationErrors};
use crate::linalg::{self, Inertia, LinalgError, RationalMatrix};
use crate::rational::{self, Rational};

pub use boundary::{boundary_classes, BoundaryClasses, OrientedBoundary};
pub use certify::{
    construct_certificate_supersingular, search_certificate, search_certificate_strict,
    solve_gamma, SearchOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error(transparent)]
    Invalid(#[from] ValidationErrors),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("certificate has {got_a} vertex values and {got_gamma} edge values, expected {want_a} and {want_gamma}")]
    IndexMismatch {
        got_a: usize,
        got_gamma: usize,
        want_a: usize,
        want_gamma: usize,
    },
    #[error("constructed certificate failed verification: {0}")]
    VerificationFailed(String),
    #[error("boundary class identity violated: {0}")]
    IdentityViolation(String),
    #[error("inertia reports {n_zero} zero eigenvalues but the kernel has dimension {kernel}")]
    KernelMismatch { n_zero: usize, kernel: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strictness {
    /// `|γ_e| < 1` for every edge.
    Strict,
    /// `|γ_e| ≤ 1` for every edge.
    Weak,
}

impl Strictness {
    pub fn as_str(self) -> &'static str {
        match self {
            Strictness::Strict => "strict",
            Strictness::Weak => "weak",
        }
    }
}

/// How a certificate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateOrigin {
    /// `a = |l|` for a nowhere-zero kernel vector `l` of a positive
    /// semidefinite `H_M`, with `γ_e = ±1` on edges inside `P`/`N` classes
    /// and `0` on `E₀`.
    KernelConstruction,
    /// Exact linear program in `γ` for a searched `a`.
    LinearProgram,
}

impl CertificateOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateOrigin::KernelConstruction => "kernel_construction",
            CertificateOrigin::LinearProgram => "linear_program",
        }
    }
}

/// A solution `{a, γ}` of the compatibility equation, indexed by vertex and
/// edge position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CECertificate {
    pub a: Vec<Rational>,
    pub gamma: Vec<Rational>,
    pub strictness: Strictness,
    pub origin: CertificateOrigin,
}

impl CECertificate {
    pub fn max_abs_gamma(&self) -> Rational {
        self.gamma
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Same `γ`, every `a_v` multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> CECertificate {
        CECertificate {
            a: self.a.iter().map(|x| x * factor).collect(),
            ..self.clone()
        }
    }
}

/// `Σ_{w=(v,e) ∈ ∂v} γ_e a_{e(v)} / b_e - k_v a_v` for every vertex.
pub fn ce_residuals(g: &GraphManifold, a: &[Rational], gamma: &[Rational]) -> Vec<Rational> {
    (0..g.vertex_count())
        .map(|v| {
            let rhs: Rational = g
                .star(v)
                .iter()
                .map(|w| &gamma[w.edge] * &a[w.head] / g.edge_b(w.edge))
                .sum();
            rhs - g.charge(v) * &a[v]
        })
        .collect()
}

/// Exact check of a certificate: positivity of `a`, the bound on `γ` for
/// its strictness, and every compatibility equality.
pub fn verify_ce(g: &GraphManifold, cert: &CECertificate) -> Result<bool, DecisionError> {
    if cert.a.len() != g.vertex_count() || cert.gamma.len() != g.edge_count() {
        return Err(DecisionError::IndexMismatch {
            got_a: cert.a.len(),
            got_gamma: cert.gamma.len(),
            want_a: g.vertex_count(),
            want_gamma: g.edge_count(),
        });
    }
    if !cert.a.iter().all(Signed::is_positive) {
        return Ok(false);
    }
    let one = rational::from_int(1);
    let bounded = cert.gamma.iter().all(|x| match cert.strictness {
        Strictness::Strict => x.abs() < one,
        Strictness::Weak => x.abs() <= one,
    });
    Ok(bounded && ce_residuals(g, &cert.a, &cert.gamma).iter().all(Zero::is_zero))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecideOptions {
    /// Run the strict certificate search when `H_M` has a negative
    /// eigenvalue.
    pub certify: bool,
    /// Budget of linear-program solves for certificate searches.
    pub max_iters: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            certify: true,
            max_iters: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub verdict_npc: bool,
    pub verdict_vf: bool,
    pub components: SignedComponents,
    pub hm: RationalMatrix,
    pub inertia: Inertia,
    pub hm_is_zero: bool,
    pub kernel_basis: Vec<Vec<Rational>>,
    pub supersingular: bool,
    pub kernel_witness: Option<Vec<Rational>>,
    pub certificate: Option<CECertificate>,
    pub boundary_classes: Option<BoundaryClasses>,
    pub notes: Vec<String>,
}

/// Validates `data` and runs [`decide_manifold`].
pub fn decide(data: &GraphManifoldData, opts: &DecideOptions) -> Result<AnalysisReport, DecisionError> {
    let g = GraphManifold::new(data.clone())?;
    decide_manifold(&g, opts)
}

pub fn decide_manifold(
    g: &GraphManifold,
    opts: &DecideOptions,
) -> Result<AnalysisReport, DecisionError> {
    let sc = SignedComponents::compute(g);
    let hm = linalg::build_hm(g, &sc);
    linalg::block_decompose(&hm, &sc)?;
    let inertia = linalg::inertia(&hm)?;
    let kernel_basis = linalg::kernel_basis(&hm);
    if kernel_basis.len() != inertia.n_zero {
        return Err(DecisionError::KernelMismatch {
            n_zero: inertia.n_zero,
            kernel: kernel_basis.len(),
        });
    }
    let kernel_witness = linalg::witness_from_basis(&kernel_basis, hm.dim());
    let hm_is_zero = hm.is_zero();
    let supersingular = kernel_witness.is_some();
    let negative = inertia.n_minus > 0;
    // A zero H_M with s ≢ 0 needs loops at nonzero-charge vertices; there
    // a^t H a = -2 Σ_{internal e} (1 - sgn e · γ_e) a a' / b_e forces
    // |γ_e| = 1 on internal edges, so no strict solution exists.
    let s_vanishes = sc.s.iter().all(|&x| x == 0);
    let verdict_npc = negative || (hm_is_zero && s_vanishes);
    let verdict_vf = negative || supersingular;

    let mut notes = Vec::new();
    notes.push(match (negative, hm_is_zero, s_vanishes) {
        (true, _, _) => format!("npc: H_M has {} negative eigenvalue(s)", inertia.n_minus),
        (false, true, true) => "npc: H_M is the zero matrix".to_owned(),
        (false, true, false) => {
            "no npc: H_M is zero only through self-loops at charged vertices, which forces |gamma| = 1 on them"
                .to_owned()
        }
        (false, false, _) => "no npc: H_M is positive semidefinite and nonzero".to_owned(),
    });
    notes.push(match (negative, supersingular) {
        (true, _) => "vf: H_M has a negative eigenvalue".to_owned(),
        (false, true) => "vf: H_M is positive semidefinite and supersingular".to_owned(),
        (false, false) => {
            "no vf: H_M is positive semidefinite and every kernel vector has a zero entry"
                .to_owned()
        }
    });
    if sc.orientation_flipped {
        notes.push("orientation reversed: all charges negated to place a positive charge in P".to_owned());
    }
    if sc.sign_conflict {
        notes.push(
            "sign conflict: the 2-coloring puts a nonzero-charge class on the side opposite to its charge"
                .to_owned(),
        );
    }

    let mut certificate = None;
    if negative {
        if opts.certify {
            match search_certificate_strict(g, opts.max_iters) {
                SearchOutcome::Found(c) => certificate = Some(c),
                SearchOutcome::WeakOnly(c) => {
                    notes.push(format!(
                        "certificate: no strict solution within {} LP solves; weak solution attached",
                        opts.max_iters
                    ));
                    certificate = Some(c);
                }
                SearchOutcome::NotFound => notes.push(format!(
                    "certificate: none found within {} LP solves (verdict unaffected)",
                    opts.max_iters
                )),
            }
        }
    } else if let Some(l) = &kernel_witness {
        if sc.parts.is_some() || g.charges().all(Zero::is_zero) {
            certificate = Some(construct_certificate_supersingular(g, &sc, l)?);
        } else {
            // non-bipartite and positive semidefinite, hence H_M = 0
            match search_certificate(g, opts.max_iters, Strictness::Strict) {
                SearchOutcome::Found(c) => certificate = Some(c),
                SearchOutcome::WeakOnly(c) => {
                    notes.push(format!(
                        "certificate: no strict solution within {} LP solves; weak solution attached",
                        opts.max_iters
                    ));
                    certificate = Some(c);
                }
                SearchOutcome::NotFound => notes.push(format!(
                    "certificate: none found within {} LP solves (verdict unaffected)",
                    opts.max_iters
                )),
            }
        }
    }
    if let Some(c) = &certificate {
        if !verify_ce(g, c)? {
            return Err(DecisionError::VerificationFailed(format!(
                "{} certificate from {}",
                c.strictness.as_str(),
                c.origin.as_str()
            )));
        }
        notes.push(format!(
            "certificate: {} solution from {}, max |gamma| = {}",
            c.strictness.as_str(),
            c.origin.as_str(),
            rational::format(&c.max_abs_gamma())
        ));
    }
    let boundary_classes = certificate
        .as_ref()
        .map(|c| boundary_classes(g, c))
        .transpose()?;

    Ok(AnalysisReport {
        verdict_npc,
        verdict_vf,
        components: sc,
        hm,
        inertia,
        hm_is_zero,
        kernel_basis,
        supersingular,
        kernel_witness,
        certificate,
        boundary_classes,
        notes,
    })
}
