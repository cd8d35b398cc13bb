//! Exact decision procedures for closed graph manifolds described by their
//! decorated dual graph: vertex charges `k_v` and edge intersection numbers
//! `b_e`.
//!
//! The pipeline is
//!
//! 1. [`graph`]: the decorated multigraph, validation and reduction of raw
//!    gluing matrices to charges and intersection numbers;
//! 2. [`components`]: signed components, the factor graph and the sign
//!    function `s`;
//! 3. [`linalg`]: the symmetric matrix `H_M`, exact inertia, kernels and
//!    nowhere-zero kernel witnesses;
//! 4. [`decision`]: verdicts (non-positively curved metric, virtual
//!    fibration) together with exactly verified certificates for the
//!    compatibility equation;
//! 5. [`io`]: JSON manifests and reports, instance generation and the
//!    self-test harness behind the `graphmfd` binary.
//!
//! All verdict-bearing arithmetic is done over arbitrary-precision rationals.

pub mod components;
pub mod decision;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod rational;
mod unionfind;

pub use components::{Sign, SignedComponents};
pub use decision::{
    decide, verify_ce, AnalysisReport, BoundaryClasses, CECertificate, DecideOptions,
    DecisionError, Strictness,
};
pub use graph::{Edge, EdgeId, GraphError, GraphManifold, GraphManifoldData, Vertex, VertexId};
pub use linalg::{Inertia, RationalMatrix};
pub use rational::Rational;

/// Version string embedded in report envelopes.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
