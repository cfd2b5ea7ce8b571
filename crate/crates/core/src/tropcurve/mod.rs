//! Weighted graphs with legs, combinatorial types (graphs decorated with
//! integral slopes), and parameterized tropical curves.

mod curve;
mod graph;
mod stabilize;
mod ty;

use thiserror::Error;

use crate::linalg::RatVector;

pub use curve::{realize, type_of, ParameterizedTropicalCurve};
pub use graph::{genus, is_stable, Edge, Leg, Vertex, WeightedGraph};
pub use stabilize::{stabilize, stabilize_type, StabilizedType};
pub use ty::{check_balanced, CombinatorialType, Degree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("{what}: expected {expected} entries, found {found}")]
    Shape {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("edge `{0}` has nonpositive length")]
    NonPositiveLength(String),
    #[error("type is unbalanced at vertex `{0}`")]
    Unbalanced(String),
    #[error("cycle through edges {cycle:?} does not close: length-weighted slope sum {sum}")]
    CycleInconsistency { cycle: Vec<String>, sum: RatVector },
    #[error("no stable model: {0}")]
    Unstabilizable(String),
}
