//! Families of parameterized tropical curves over a polyhedral complex,
//! their fibers, the induced map to moduli, verdicts at walls, and closure
//! propagation through the wall graph.

mod alpha;
mod propagate;
mod validate;
mod verdict;

use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::{IntMatrix, IntVector, Rat, RatVector};
use crate::moduli::ModuliError;
use crate::polyhedral::{AffineMap, FaceId, PolyhedralComplex, PolyhedralError};
use crate::tropcurve::{CombinatorialType, CurveError};

pub use alpha::{image_strata, induced_alpha, FaceLift, ImageStratum, InducedMap};
pub use propagate::{propagate_closure, propagate_indices, Propagation, PropagationStep};
pub use validate::{fiber, locate, validate_family};
pub use verdict::{wall_verdict, wall_verdicts, Coverage, Verdict, WallVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("malformed family: {0}")]
    Malformed(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("unknown face `{0}`")]
    UnknownFace(String),
    #[error("point {0} does not lie in the complex")]
    PointNotInComplex(String),
    #[error("seed is not a node of the wall graph: {0}")]
    SeedNotInGraph(String),
    #[error(transparent)]
    Polyhedral(#[from] PolyhedralError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
}

/// The curve data over one face `W`: its type `Θ_W`, an integral affine
/// length function `W → R` per edge, and an integral affine position
/// function `W → N_R` per vertex, all in the face's chart coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceFamily {
    pub ty: CombinatorialType,
    pub lengths: Vec<AffineMap>,
    pub positions: Vec<AffineMap>,
}

impl FaceFamily {
    /// Lengths and positions at a chart point.
    pub fn at(&self, q: &RatVector) -> (Vec<Rat>, Vec<RatVector>) {
        let lengths = self.lengths.iter().map(|l| l.apply(q).0[0].clone()).collect();
        let positions = self.positions.iter().map(|h| h.apply(q)).collect();
        (lengths, positions)
    }
}

/// The weighted contraction `φ: Γ_sup → Γ_sub` attached to `sub ⊂ sup`.
/// `edge_map[e]` is `None` when edge `e` of `Θ_sup` is contracted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub sub: FaceId,
    pub sup: FaceId,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct FamilyDatum {
    pub base: PolyhedralComplex,
    pub extended_degree: Vec<IntVector>,
    pub faces: Vec<FaceFamily>,
    pub contractions: Vec<Contraction>,
}

impl FamilyDatum {
    /// Checks shapes: one entry per base face, one length per edge and one
    /// position per vertex with the right dimensions, and contraction maps
    /// of the right sizes.
    pub fn new(
        base: PolyhedralComplex,
        extended_degree: Vec<IntVector>,
        faces: Vec<FaceFamily>,
        contractions: Vec<Contraction>,
    ) -> Result<Self, FamilyError> {
        if faces.len() != base.len() {
            return Err(FamilyError::Malformed(format!(
                "{} face entries for {} faces",
                faces.len(),
                base.len()
            )));
        }
        for (w, ff) in faces.iter().enumerate() {
            let face = base.face(w);
            let ty = &ff.ty;
            let bad = |what: &str| FamilyError::Malformed(format!("face {}: {what}", face.id));
            if ff.lengths.len() != ty.graph.edges.len() {
                return Err(bad("one length function per edge expected"));
            }
            if ff.positions.len() != ty.graph.vertices.len() {
                return Err(bad("one position function per vertex expected"));
            }
            if ff
                .lengths
                .iter()
                .any(|l| l.source_dim() != face.rank || l.target_dim() != 1)
            {
                return Err(bad("length functions must map the chart to R"));
            }
            if ff
                .positions
                .iter()
                .any(|h| h.source_dim() != face.rank || h.target_dim() != ty.dim)
            {
                return Err(bad("position functions must map the chart to N_R"));
            }
        }
        for c in &contractions {
            if c.sub >= faces.len() || c.sup >= faces.len() {
                return Err(FamilyError::Malformed("contraction between unknown faces".into()));
            }
            let (gs, gt) = (&faces[c.sup].ty.graph, &faces[c.sub].ty.graph);
            if c.vertex_map.len() != gs.vertices.len()
                || c.edge_map.len() != gs.edges.len()
                || c.vertex_map.iter().any(|&v| v >= gt.vertices.len())
                || c.edge_map.iter().flatten().any(|&e| e >= gt.edges.len())
            {
                return Err(FamilyError::Malformed(format!(
                    "contraction {} -> {} has maps of the wrong size",
                    base.face(c.sup).id,
                    base.face(c.sub).id
                )));
            }
        }
        Ok(FamilyDatum {
            base,
            extended_degree,
            faces,
            contractions,
        })
    }

    pub fn contraction(&self, sub: FaceId, sup: FaceId) -> Option<&Contraction> {
        self.contractions.iter().find(|c| c.sub == sub && c.sup == sup)
    }
}

/// Rows of several affine maps on the same source, stacked.
pub(crate) fn stack(source_dim: usize, maps: &[&AffineMap]) -> AffineMap {
    let mut entries = Vec::new();
    let mut translation = Vec::new();
    for m in maps {
        debug_assert_eq!(m.source_dim(), source_dim);
        for i in 0..m.target_dim() {
            entries.extend(m.linear.row(i).iter().cloned());
        }
        translation.extend(m.translation.0.iter().cloned());
    }
    AffineMap::new(
        IntMatrix::new(translation.len(), source_dim, entries),
        RatVector(translation),
    )
}

/// `Σ k_i · m_i` for maps of equal shape.
pub(crate) fn combine(terms: &[(i64, &AffineMap)]) -> AffineMap {
    let first = terms[0].1;
    let (rows, cols) = (first.target_dim(), first.source_dim());
    let mut linear = IntMatrix::zeros(rows, cols);
    let mut translation = RatVector::zeros(rows);
    for (k, m) in terms {
        let kb = BigInt::from(*k);
        for i in 0..rows {
            for j in 0..cols {
                let x = linear.get(i, j) + &kb * m.linear.get(i, j);
                linear.set(i, j, x);
            }
        }
        translation.add_scaled(&Rat::from_integer(kb), &m.translation);
    }
    AffineMap::new(linear, translation)
}

/// The map `q ↦ ℓ(q) · s` for a scalar function `ℓ` and integral vector `s`.
pub(crate) fn times_vector(l: &AffineMap, s: &IntVector) -> AffineMap {
    let cols = l.source_dim();
    let mut linear = IntMatrix::zeros(s.dim(), cols);
    let mut translation = RatVector::zeros(s.dim());
    for (i, &si) in s.0.iter().enumerate() {
        let k = BigInt::from(si);
        for j in 0..cols {
            linear.set(i, j, &k * l.linear.get(0, j));
        }
        translation.0[i] = &l.translation.0[0] * Rat::from_integer(k);
    }
    AffineMap::new(linear, translation)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::linalg::rat;
    use crate::polyhedral::{Face, FaceInclusion, Polyhedron};
    use crate::tropcurve::WeightedGraph;

    pub(crate) fn iv(v: &[i64]) -> IntVector {
        IntVector(v.to_vec())
    }

    pub(crate) fn cross_degree() -> Vec<IntVector> {
        vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, 0]), iv(&[0, -1])]
    }

    pub(crate) fn affine(linear: &[i64], offset: Rat) -> AffineMap {
        AffineMap::new(
            IntMatrix::from_rows(linear.len(), &[linear.to_vec()]),
            RatVector(vec![offset]),
        )
    }

    pub(crate) fn position(columns: &[[i64; 2]], offset: [i64; 2]) -> AffineMap {
        let rows: Vec<Vec<i64>> = (0..2).map(|k| columns.iter().map(|c| c[k]).collect()).collect();
        AffineMap::new(
            IntMatrix::from_rows(columns.len(), &rows),
            RatVector::from_ints(&offset),
        )
    }

    /// The cross over a point at the origin.
    pub(crate) fn cross_face(rank: usize) -> FaceFamily {
        let g = WeightedGraph::from_ids(&[("v", 0)], &[], &[("a", "v"), ("b", "v"), ("c", "v"), ("d", "v")]).unwrap();
        FaceFamily {
            ty: CombinatorialType::new(g, vec![], cross_degree(), 2).unwrap(),
            lengths: vec![],
            positions: vec![position(&vec![[0, 0]; rank], [0, 0])],
        }
    }

    /// Resolution of the cross pairing legs `p` with `q` at `x`, over a ray
    /// with the new edge of length `t + shift` and `x` fixed at the origin.
    pub(crate) fn resolution_face(p: usize, q: usize, shift: i64) -> FaceFamily {
        let names = ["a", "b", "c", "d"];
        let legs: Vec<(&str, &str)> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (*n, if i == p || i == q { "x" } else { "y" }))
            .collect();
        let g = WeightedGraph::from_ids(&[("x", 0), ("y", 0)], &[("e", "x", "y")], &legs).unwrap();
        let deg = cross_degree();
        let s = -&(&deg[p] + &deg[q]);
        let ty = CombinatorialType::new(g, vec![s.clone()], deg, 2).unwrap();
        FaceFamily {
            ty,
            lengths: vec![affine(&[1], rat(shift))],
            positions: vec![
                position(&[[0, 0]], [0, 0]),
                position(&[[s.0[0], s.0[1]]], [s.0[0] * shift, s.0[1] * shift]),
            ],
        }
    }

    pub(crate) fn rays(n: usize) -> PolyhedralComplex {
        let mut faces = vec![Face::new("o", Polyhedron::point())];
        let mut incs = Vec::new();
        for i in 0..n {
            faces.push(Face::new(format!("r{i}"), Polyhedron::orthant(1)));
            incs.push(FaceInclusion {
                sub: 0,
                sup: i + 1,
                embed: AffineMap::constant(0, RatVector::zeros(1)),
            });
        }
        PolyhedralComplex::new(faces, incs).unwrap()
    }

    fn to_cross(sup: FaceId) -> Contraction {
        Contraction {
            sub: 0,
            sup,
            vertex_map: vec![0, 0],
            edge_map: vec![None],
        }
    }

    pub(crate) fn point_family() -> FamilyDatum {
        let g = WeightedGraph::from_ids(&[("v", 0)], &[], &[("a", "v"), ("b", "v"), ("c", "v")]).unwrap();
        let deg = vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1])];
        let ty = CombinatorialType::new(g, vec![], deg.clone(), 2).unwrap();
        let base = PolyhedralComplex::new(vec![Face::new("o", Polyhedron::point())], vec![]).unwrap();
        let face = FaceFamily {
            ty,
            lengths: vec![],
            positions: vec![position(&[], [1, 2])],
        };
        FamilyDatum::new(base, deg, vec![face], vec![]).unwrap()
    }

    /// Cross over the vertex, the resolution pairing legs `a, b` over the
    /// ray with new edge length `t + shift`.
    pub(crate) fn ray_family(shift: i64) -> FamilyDatum {
        FamilyDatum::new(
            rays(1),
            cross_degree(),
            vec![cross_face(0), resolution_face(0, 1, shift)],
            vec![to_cross(1)],
        )
        .unwrap()
    }

    /// One ray per resolution of the cross.
    pub(crate) fn three_ray_family() -> FamilyDatum {
        FamilyDatum::new(
            rays(3),
            cross_degree(),
            vec![
                cross_face(0),
                resolution_face(0, 1, 0),
                resolution_face(0, 2, 0),
                resolution_face(0, 3, 0),
            ],
            (1..=3).map(to_cross).collect(),
        )
        .unwrap()
    }

    /// Two opposite rays carrying the same resolution with constant edge
    /// length, translated along `+e1` and `-e1`.
    pub(crate) fn two_ray_family() -> FamilyDatum {
        let over = |dir: i64| {
            let mut f = resolution_face(0, 1, 1);
            f.lengths = vec![affine(&[0], rat(1))];
            f.positions = vec![position(&[[dir, 0]], [0, 0]), position(&[[dir, 0]], [-1, -1])];
            f
        };
        let mut at_origin = resolution_face(0, 1, 1);
        at_origin.lengths = vec![affine(&[], rat(1))];
        at_origin.positions = vec![position(&[], [0, 0]), position(&[], [-1, -1])];
        let keep = |sup| Contraction {
            sub: 0,
            sup,
            vertex_map: vec![0, 1],
            edge_map: vec![Some(0)],
        };
        FamilyDatum::new(
            rays(2),
            cross_degree(),
            vec![at_origin, over(1), over(-1)],
            vec![keep(1), keep(2)],
        )
        .unwrap()
    }
}
