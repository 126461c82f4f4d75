use thiserror::Error;

use crate::triangulation::Violation;

/// Location and cause of a rejected input document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation {0:?}")]
    InvalidPermutation([u8; 4]),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("malformed JSON document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("triangulation is invalid ({} violation(s)): {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidTriangulation(Vec<Violation>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("vertex {vertex} link is {kind}, expected a torus")]
    NotTorusLink { vertex: usize, kind: String },
    #[error("triangulation is not consistently oriented (gluing of tetrahedron {tet} face {face} is orientation-preserving)")]
    NotOriented { tet: usize, face: usize },
    #[error("shape of tetrahedron {0} is degenerate (0 or 1)")]
    DegenerateShape(usize),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("shape verification failed: {0}")]
    VerificationFailed(String),
    #[error("singular Jacobian at iteration {0}")]
    SingularJacobian(usize),
    #[error("Newton iteration did not reach tolerance after {0} iterations")]
    Divergence(usize),
    #[error("taut structure cannot be transported: {0}")]
    TautTransport(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
