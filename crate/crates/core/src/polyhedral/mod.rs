//! Polyhedral complexes with integral structure, piecewise integral affine
//! maps on them, stars of faces, harmonicity, and skeletons of strictly
//! semistable pairs.

mod complex;
mod map;
mod polyhedron;
mod skeleton;

use thiserror::Error;

use crate::linalg::{IntMatrix, LinalgError, Rat, RatVector};

pub use complex::{validate_complex, Face, FaceId, FaceInclusion, PolyhedralComplex};
pub use map::{harmonicity_at, lin_of_image, star, Harmonicity, HarmonicityReport, PiaMap, StarData, StarDirection};
pub use polyhedron::{Generators, Halfspace, Hyperplane, PolyFace, Polyhedron};
pub use skeleton::{build_skeleton, PairStratum, SemistablePairData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedralError {
    #[error("unknown face `{0}`")]
    UnknownFace(String),
    #[error("duplicate face id `{0}`")]
    DuplicateFace(String),
    #[error("face `{0}` has no codimension-one cofacets")]
    NoCofacets(String),
    #[error("inclusion {sub} -> {sup}: {detail}")]
    MalformedInclusion { sub: String, sup: String, detail: String },
    #[error("face inclusions contain a cycle through `{0}`")]
    InclusionCycle(String),
    #[error("map on face `{face}`: {detail}")]
    MalformedMap { face: String, detail: String },
    #[error("inconsistent strata: {0}")]
    InconsistentStrata(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `x ↦ linear · x + translation`, with integral linear part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub linear: IntMatrix,
    pub translation: RatVector,
}

impl AffineMap {
    pub fn new(linear: IntMatrix, translation: RatVector) -> Self {
        assert_eq!(linear.rows(), translation.dim(), "affine map shape mismatch");
        AffineMap { linear, translation }
    }

    pub fn identity(n: usize) -> Self {
        AffineMap::new(IntMatrix::identity(n), RatVector::zeros(n))
    }

    pub fn constant(source_dim: usize, value: RatVector) -> Self {
        AffineMap::new(IntMatrix::zeros(value.dim(), source_dim), value)
    }

    pub fn source_dim(&self) -> usize {
        self.linear.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn apply(&self, x: &RatVector) -> RatVector {
        &self.linear.apply(x) + &self.translation
    }

    /// Applies the linear part only.
    pub fn apply_linear(&self, d: &RatVector) -> RatVector {
        self.linear.apply(d)
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap::new(
            self.linear.mul(&inner.linear),
            &self.linear.apply(&inner.translation) + &self.translation,
        )
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_zero()
    }

    /// Exact preimage of `y` when the linear part is injective on it.
    pub fn preimage(&self, y: &RatVector) -> Option<RatVector> {
        let rhs: Vec<Rat> = (y - &self.translation).0;
        let rows = self.linear.to_rat_rows();
        let x = crate::linalg::solve(&rows, &rhs, self.source_dim())?;
        let x = RatVector(x);
        // solve() returns one solution; reject when it misses y.
        if self.apply(&x) == *y {
            Some(x)
        } else {
            None
        }
    }
}
