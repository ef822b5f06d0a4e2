//! Realization of finite labeled graphs as Reeb graphs of Morse functions
//! with prescribed regular-level types.
//!
//! The crate decides whether a labeled multigraph satisfies the realization
//! hypotheses (good height function, extrema of degree one, sphere labels at
//! extrema, labels bounding handlebodies), assembles an explicit block/tube
//! construction plan with ordered critical values and Morse index counts,
//! and verifies the plan through computable invariants: Euler/handle
//! bookkeeping, Smith-normal-form first homology of surgery labels, and,
//! in dimension two, a full triangulated realization whose PL Reeb graph
//! is extracted by a plateau-aware sweep and matched back against the input.
//!
//! Everything is exact: heights are arbitrary-precision rationals and the
//! linear algebra is over arbitrary-precision integers, so there are no
//! tolerance knobs anywhere.

pub mod dot;
pub mod graph;
pub mod handle;
pub mod iso;
pub mod json;
pub mod plan;
pub mod rational;
pub mod suites;
pub mod surface;
pub mod verify;
pub mod zalgebra;

pub use graph::{HypothesisReport, LabeledGraph, PreimageLabel, Violation};
pub use handle::{BoundaryInvariants, Feet, Handle, HandlebodyPlan};
pub use plan::{MorsePlan, VertexBlock};
pub use surface::{ReebGraph, TriangulatedSurface};

use thiserror::Error;

/// Crate-wide error type. The variants map onto the CLI exit-code contract:
/// malformed input, infeasible input, and internal invariant violations are
/// kept apart so callers can tell a bad file from a bad graph from a bug.
#[derive(Debug, Error)]
pub enum Error {
    /// Input could not be parsed or refers to undefined ids.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// Input is well-formed but violates the realization hypotheses.
    #[error("infeasible: {0}")]
    Infeasible(HypothesisReport),
    /// Precondition of an operation violated by the caller.
    #[error("precondition: {0}")]
    Precondition(String),
    /// An internal invariant failed; this is a bug, not a user error.
    #[error("internal invariant `{id}` violated: {detail}")]
    Internal { id: String, detail: String },
}

impl Error {
    pub(crate) fn internal(id: &str, detail: impl Into<String>) -> Self {
        Error::Internal {
            id: id.to_string(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
