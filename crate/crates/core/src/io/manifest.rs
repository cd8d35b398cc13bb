//! JSON manifests.
//!
//! Reduced form:
//!
//! ```json
//! {"vertices":[{"id":"v0","charge":"1/2"},{"id":"v1","charge":1}],
//!  "edges":[{"id":"e0","ends":["v0","v1"],"b":2,"bw_sign":-1}]}
//! ```
//!
//! Gluing form: vertices carry no charge and every edge carries a
//! `"gluing": [[int,int],[int,int]]` matrix instead of `b`/`bw_sign`.
//! Charges are exact: a canonical `"p/q"` string or a bare JSON integer.
//! `schema_version` is optional.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::InputError;
use crate::graph::{
    ingest_gluing, validate, Edge, EdgeId, GluingDatum, GraphManifoldData, GraphShape, Vertex,
    VertexId,
};
use crate::rational::{self, Rational};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManifestBody {
    Reduced(GraphManifoldData),
    Gluing {
        shape: GraphShape,
        gluings: Vec<GluingDatum>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub schema_version: Option<u32>,
    pub body: ManifestBody,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema_version: Option<u32>,
    #[serde(default)]
    vertices: Vec<RawVertex>,
    #[serde(default)]
    edges: Vec<RawEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    charge: Option<Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    id: String,
    ends: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bw_sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gluing: Option<[[i64; 2]; 2]>,
}

fn charge_from_json(id: &str, v: &Value) -> Result<Rational, InputError> {
    let bad = |why: String| InputError::new("BAD_RATIONAL", format!("vertex {id}: {why}"));
    match v {
        Value::String(s) => rational::parse(s).map_err(|e| bad(e.to_string())),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            rational::parse(&n.to_string()).map_err(|e| bad(e.to_string()))
        }
        other => Err(bad(format!(
            "charge must be a \"p/q\" string or an integer, got {other}"
        ))),
    }
}

fn charge_to_json(q: &Rational) -> Value {
    if q.is_integer() {
        if let Ok(n) = q.numer().to_string().parse::<i64>() {
            return Value::from(n);
        }
    }
    Value::String(rational::format(q))
}

/// Parses a manifest without checking graph-level validity.
pub fn parse_manifest(text: &str) -> Result<Manifest, InputError> {
    let raw: RawManifest =
        serde_json::from_str(text).map_err(|e| InputError::new("BAD_JSON", e.to_string()))?;
    if let Some(v) = raw.schema_version {
        if v != SCHEMA_VERSION {
            return Err(InputError::new(
                "UNSUPPORTED_SCHEMA",
                format!("schema_version {v} is not supported (expected {SCHEMA_VERSION})"),
            ));
        }
    }
    let glued = raw.edges.iter().filter(|e| e.gluing.is_some()).count();
    let charged = raw.vertices.iter().filter(|v| v.charge.is_some()).count();
    let has_b = raw
        .edges
        .iter()
        .any(|e| e.b.is_some() || e.bw_sign.is_some());
    let gluing_form = glued > 0 || (charged == 0 && raw.edges.is_empty() && !raw.vertices.is_empty());
    let body = if gluing_form {
        if glued != raw.edges.len() || charged > 0 || has_b {
            return Err(InputError::new(
                "MIXED_FORM",
                "a manifest is either fully reduced (charges, b) or fully glued (gluing matrices)",
            ));
        }
        let shape = GraphShape {
            vertices: raw.vertices.iter().map(|v| VertexId(v.id.clone())).collect(),
            edges: raw
                .edges
                .iter()
                .map(|e| {
                    (
                        EdgeId(e.id.clone()),
                        [VertexId(e.ends[0].clone()), VertexId(e.ends[1].clone())],
                    )
                })
                .collect(),
        };
        let gluings = raw
            .edges
            .iter()
            .map(|e| GluingDatum {
                edge: EdgeId(e.id.clone()),
                matrix: e.gluing.expect("checked above"),
            })
            .collect();
        ManifestBody::Gluing { shape, gluings }
    } else {
        let mut vertices = Vec::with_capacity(raw.vertices.len());
        for v in &raw.vertices {
            let charge = v.charge.as_ref().ok_or_else(|| {
                InputError::new("SCHEMA", format!("vertex {} has no charge", v.id))
            })?;
            vertices.push(Vertex {
                id: VertexId(v.id.clone()),
                charge: charge_from_json(&v.id, charge)?,
            });
        }
        let mut edges = Vec::with_capacity(raw.edges.len());
        for e in &raw.edges {
            let b = e
                .b
                .ok_or_else(|| InputError::new("SCHEMA", format!("edge {} has no b", e.id)))?;
            edges.push(Edge {
                id: EdgeId(e.id.clone()),
                ends: [VertexId(e.ends[0].clone()), VertexId(e.ends[1].clone())],
                b,
                bw_sign: e.bw_sign.unwrap_or(1),
            });
        }
        ManifestBody::Reduced(GraphManifoldData { vertices, edges })
    };
    Ok(Manifest {
        schema_version: raw.schema_version,
        body,
    })
}

impl Manifest {
    pub fn reduced(data: GraphManifoldData) -> Self {
        Manifest {
            schema_version: Some(SCHEMA_VERSION),
            body: ManifestBody::Reduced(data),
        }
    }

    /// Reduces a gluing-form manifest and validates the result.
    pub fn to_data(&self) -> Result<GraphManifoldData, InputError> {
        let data = match &self.body {
            ManifestBody::Reduced(d) => d.clone(),
            ManifestBody::Gluing { shape, gluings } => ingest_gluing(shape, gluings)?,
        };
        validate(&data)?;
        Ok(data)
    }

    /// Canonical pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let raw = match &self.body {
            ManifestBody::Reduced(d) => RawManifest {
                schema_version: self.schema_version,
                vertices: d
                    .vertices
                    .iter()
                    .map(|v| RawVertex {
                        id: v.id.0.clone(),
                        charge: Some(charge_to_json(&v.charge)),
                    })
                    .collect(),
                edges: d
                    .edges
                    .iter()
                    .map(|e| RawEdge {
                        id: e.id.0.clone(),
                        ends: [e.ends[0].0.clone(), e.ends[1].0.clone()],
                        b: Some(e.b),
                        bw_sign: (e.bw_sign != 1).then_some(e.bw_sign),
                        gluing: None,
                    })
                    .collect(),
            },
            ManifestBody::Gluing { shape, gluings } => RawManifest {
                schema_version: self.schema_version,
                vertices: shape
                    .vertices
                    .iter()
                    .map(|v| RawVertex {
                        id: v.0.clone(),
                        charge: None,
                    })
                    .collect(),
                edges: shape
                    .edges
                    .iter()
                    .map(|(id, ends)| RawEdge {
                        id: id.0.clone(),
                        ends: [ends[0].0.clone(), ends[1].0.clone()],
                        b: None,
                        bw_sign: None,
                        gluing: gluings.iter().find(|g| &g.edge == id).map(|g| g.matrix),
                    })
                    .collect(),
            },
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Reads, reduces and validates a manifest.
pub fn load_manifest(text: &str) -> Result<GraphManifoldData, InputError> {
    parse_manifest(text)?.to_data()
}
