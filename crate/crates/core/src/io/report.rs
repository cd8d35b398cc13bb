//! JSON form of an [`AnalysisReport`] and its envelope.
//!
//! Every rational is a canonical `"p/q"` (or integer) string. The payload is
//! a pure function of the input and the tool version; timing lives in the
//! envelope only.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::decision::AnalysisReport;
use crate::graph::GraphManifoldData;
use crate::rational::{self, Rational};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InertiaJson {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassJson {
    pub id: String,
    pub sign: &'static str,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartsJson {
    #[serde(rename = "P")]
    pub p: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentsJson {
    pub classes: Vec<ClassJson>,
    pub e0_edges: Vec<String>,
    pub bipartite: bool,
    pub parts: Option<PartsJson>,
    /// `s(v)` in vertex order.
    pub s: Vec<i8>,
    pub orientation_flipped: bool,
    pub sign_conflict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateJson {
    pub strictness: &'static str,
    pub origin: &'static str,
    pub a: Vec<String>,
    pub gamma: Vec<String>,
    pub max_abs_gamma: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientedBoundaryJson {
    pub edge: String,
    pub from: String,
    pub to: String,
    pub b_w: String,
    /// Coefficients on `(f_w, f_{-w})`.
    pub c_plus: [String; 2],
    pub c_minus: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryJson {
    pub scale: String,
    pub scaled_a: Vec<String>,
    pub oriented_edges: Vec<OrientedBoundaryJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportJson {
    pub verdict_npc: bool,
    pub verdict_vf: bool,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub inertia: InertiaJson,
    pub hm_is_zero: bool,
    pub supersingular: bool,
    pub hm: Vec<Vec<String>>,
    pub signed_components: ComponentsJson,
    pub kernel_basis: Vec<Vec<String>>,
    pub kernel_witness: Option<Vec<String>>,
    pub certificate: Option<CertificateJson>,
    pub boundary_classes: Option<BoundaryJson>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEnvelope {
    /// `sha256:<hex>` of the input bytes.
    pub input_digest: String,
    pub tool_version: String,
    pub report: ReportJson,
    pub timing: Timing,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::format).collect()
}

impl ReportJson {
    pub fn new(data: &GraphManifoldData, r: &AnalysisReport) -> Self {
        let vid = |v: usize| data.vertices[v].id.0.clone();
        let sc = &r.components;
        let class_ids = |idx: &[usize]| idx.iter().map(|&u| sc.class_id(u)).collect::<Vec<_>>();
        let signed_components = ComponentsJson {
            classes: sc
                .classes
                .iter()
                .enumerate()
                .map(|(u, c)| ClassJson {
                    id: sc.class_id(u),
                    sign: c.sign.symbol(),
                    vertices: c.members.iter().map(|&v| vid(v)).collect(),
                })
                .collect(),
            e0_edges: sc
                .e0_edges
                .iter()
                .map(|&e| data.edges[e].id.0.clone())
                .collect(),
            bipartite: sc.bipartite,
            parts: sc.parts.as_ref().map(|p| PartsJson {
                p: class_ids(&p.p),
                n: class_ids(&p.n),
            }),
            s: sc.s.clone(),
            orientation_flipped: sc.orientation_flipped,
            sign_conflict: sc.sign_conflict,
        };
        let certificate = r.certificate.as_ref().map(|c| CertificateJson {
            strictness: c.strictness.as_str(),
            origin: c.origin.as_str(),
            a: strings(&c.a),
            gamma: strings(&c.gamma),
            max_abs_gamma: rational::format(&c.max_abs_gamma()),
        });
        let boundary_classes = r.boundary_classes.as_ref().map(|bc| BoundaryJson {
            scale: bc.scale.to_string(),
            scaled_a: strings(&bc.scaled_a),
            oriented_edges: bc
                .classes
                .iter()
                .map(|c| OrientedBoundaryJson {
                    edge: data.edges[c.w.edge].id.0.clone(),
                    from: vid(c.w.tail),
                    to: vid(c.w.head),
                    b_w: rational::format(&c.bw),
                    c_plus: [rational::format(&c.c_plus[0]), rational::format(&c.c_plus[1])],
                    c_minus: [
                        rational::format(&c.c_minus[0]),
                        rational::format(&c.c_minus[1]),
                    ],
                })
                .collect(),
        });
        ReportJson {
            verdict_npc: r.verdict_npc,
            verdict_vf: r.verdict_vf,
            vertices: data.vertices.iter().map(|v| v.id.0.clone()).collect(),
            edges: data.edges.iter().map(|e| e.id.0.clone()).collect(),
            inertia: InertiaJson {
                n_plus: r.inertia.n_plus,
                n_zero: r.inertia.n_zero,
                n_minus: r.inertia.n_minus,
            },
            hm_is_zero: r.hm_is_zero,
            supersingular: r.supersingular,
            hm: r.hm.to_strings(),
            signed_components,
            kernel_basis: r.kernel_basis.iter().map(|v| strings(v)).collect(),
            kernel_witness: r.kernel_witness.as_deref().map(strings),
            certificate,
            boundary_classes,
            notes: r.notes.clone(),
        }
    }

    /// Deterministic pretty JSON of the payload alone.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn input_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

impl ReportEnvelope {
    pub fn new(input: &[u8], report: ReportJson, elapsed_us: u64) -> Self {
        ReportEnvelope {
            input_digest: input_digest(input),
            tool_version: TOOL_VERSION.to_owned(),
            report,
            timing: Timing { elapsed_us },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }
}

/// One-paragraph human summary for standard output. Not a stable format.
pub fn summary(name: &str, r: &ReportJson) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let cert = match &r.certificate {
        Some(c) => format!("{} ({}, max |gamma| = {})", c.strictness, c.origin, c.max_abs_gamma),
        None => "none".to_owned(),
    };
    format!(
        "{name}: NPC metric: {}, virtually fibered: {}, inertia (+{}, 0:{}, -{}), supersingular: {}, certificate: {cert}",
        yn(r.verdict_npc),
        yn(r.verdict_vf),
        r.inertia.n_plus,
        r.inertia.n_zero,
        r.inertia.n_minus,
        yn(r.supersingular),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{decide, DecideOptions};
    use crate::io::manifest::load_manifest;

    #[test]
    fn two_vertex_report() {
        let data = load_manifest(
            r#"{"vertices":[{"id":"a","charge":1},{"id":"b","charge":1}],
                "edges":[{"id":"e","ends":["a","b"],"b":1}]}"#,
        )
        .unwrap();
        let r = decide(&data, &DecideOptions::default()).unwrap();
        let j = ReportJson::new(&data, &r);
        assert!(j.verdict_vf && !j.verdict_npc);
        assert_eq!(j.hm, vec![vec!["1", "-1"], vec!["-1", "1"]]);
        let c = j.certificate.as_ref().unwrap();
        assert_eq!(c.a, vec!["1", "1"]);
        assert_eq!(c.gamma, vec!["1"]);
        assert_eq!(j.to_json(), ReportJson::new(&data, &r).to_json());
    }

    #[test]
    fn digest_format() {
        assert_eq!(
            input_digest(b""),
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
