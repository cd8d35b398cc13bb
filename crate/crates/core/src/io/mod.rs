//! File formats, instance generation and the self-test harness.

pub mod generate;
pub mod manifest;
pub mod report;
pub mod selftest;
pub mod suite;

use thiserror::Error;

use crate::graph::{GraphError, ValidationErrors};

/// An input problem with a stable machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{code}: {message}")]
pub struct InputError {
    pub code: &'static str,
    pub message: String,
}

impl InputError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        InputError {
            code,
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "error": { "code": self.code, "message": self.message } })
    }
}

pub fn graph_error_code(e: &GraphError) -> &'static str {
    match e {
        GraphError::EmptyGraph => "EMPTY_GRAPH",
        GraphError::DisconnectedGraph { .. } => "DISCONNECTED_GRAPH",
        GraphError::NonPositiveB { .. } => "NON_POSITIVE_B",
        GraphError::BadSign { .. } => "BAD_SIGN",
        GraphError::DuplicateId(_) => "DUPLICATE_ID",
        GraphError::UnknownVertex(_) => "UNKNOWN_VERTEX",
        GraphError::FiberMatch(_) => "FIBER_MATCH",
        GraphError::BadDeterminant { .. } => "BAD_DETERMINANT",
        GraphError::MissingGluing(_) => "MISSING_GLUING",
        GraphError::UnknownEdge(_) => "UNKNOWN_EDGE",
    }
}

impl From<GraphError> for InputError {
    fn from(e: GraphError) -> Self {
        InputError::new(graph_error_code(&e), e.to_string())
    }
}

impl From<ValidationErrors> for InputError {
    fn from(e: ValidationErrors) -> Self {
        let code = e.0.first().map_or("INVALID_GRAPH", graph_error_code);
        InputError::new(code, e.to_string())
    }
}
