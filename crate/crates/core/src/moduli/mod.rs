//! Strata of the moduli space of parameterized tropical curves: their
//! defining linear systems, automorphisms, walls and resolutions,
//! enumeration by combinatorial type, and connectivity through walls.

mod enumerate;
mod iso;
mod ops;
mod stratum;
mod walls;

use thiserror::Error;

use crate::tropcurve::CurveError;

pub use enumerate::{enumerate_stable_graphs, enumerate_types, slope_bound, EnumerationSpec};
pub use iso::{automorphisms, canonical_form, canonical_type, find_isomorphism, is_isomorphic, isomorphisms, TypeIso};
pub use ops::{classify, contract, contract_any, is_adjacent, resolve_4valent, Resolution, WallClass, WallKind};
pub use stratum::{dim_stratum, stratum, StratumDescriptor};
pub use walls::{connected_through_walls, wall_graph, PathStep, Wall, WallGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("type is unbalanced at vertex `{0}`")]
    UnbalancedType(String),
    #[error("edge `{0}` has nonzero slope and cannot be contracted")]
    NonzeroSlopeContraction(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` is not the 4-valent vertex of a weightless almost 3-valent type")]
    NotAlmost3Valent(String),
    #[error("types do not share genus and extended degree: {0}")]
    MixedInvariants(String),
    #[error("type is not weightless 3-valent: {0}")]
    NotWeightless3Valent(String),
    #[error("type is not a node of the wall graph: {0}")]
    NotInGraph(String),
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}
