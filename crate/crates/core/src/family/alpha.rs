use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{combine, stack, validate_family, FamilyDatum, FamilyError};
use crate::linalg::{rank, IntMatrix, RatVector};
use crate::moduli::{automorphisms, canonical_form, canonical_type, dim_stratum, find_isomorphism, TypeIso};
use crate::polyhedral::{AffineMap, FaceId};
use crate::tropcurve::{stabilize_type, CombinatorialType};

/// The lift of `α` over one face: the canonical representative of the
/// stabilized fiber type and an integral affine map from the face chart to
/// that type's coordinates (edge lengths, then vertex positions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLift {
    pub ty: CombinatorialType,
    pub key: String,
    pub lift: AffineMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub faces: Vec<FaceLift>,
}

/// Moves stratum coordinates of `ty` along the isomorphism `iso`.
pub(crate) fn transport(ty: &CombinatorialType, iso: &TypeIso, lift: &AffineMap) -> AffineMap {
    let ne = ty.graph.edges.len();
    let n = ty.dim;
    let mut target = vec![0; lift.target_dim()];
    for (e, &f) in iso.edge_map.iter().enumerate() {
        target[e] = f;
    }
    for (v, &w) in iso.vertex_map.iter().enumerate() {
        for k in 0..n {
            target[ne + v * n + k] = ne + w * n + k;
        }
    }
    let rows = lift.target_dim();
    let cols = lift.source_dim();
    let mut linear = IntMatrix::zeros(rows, cols);
    let mut translation = RatVector::zeros(rows);
    for (i, &t) in target.iter().enumerate() {
        for j in 0..cols {
            linear.set(t, j, lift.linear.get(i, j).clone());
        }
        translation.0[t] = lift.translation.0[i].clone();
    }
    AffineMap::new(linear, translation)
}

impl InducedMap {
    /// Automorphisms of the common target type carrying the lift over `sup`
    /// onto one that restricts to the lift over `sub`. `None` when the two
    /// faces map to different strata or are not included in each other.
    pub fn compatible_automorphisms(&self, f: &FamilyDatum, sub: FaceId, sup: FaceId) -> Option<Vec<TypeIso>> {
        let (a, b) = (&self.faces[sub], &self.faces[sup]);
        let inc = f.base.inclusion(sub, sup)?;
        if a.key != b.key {
            return None;
        }
        Some(
            automorphisms(&b.ty)
                .into_iter()
                .filter(|g| transport(&b.ty, g, &b.lift).compose(&inc.embed) == a.lift)
                .collect(),
        )
    }
}

fn lift_face(f: &FamilyDatum, w: FaceId) -> Result<FaceLift, FamilyError> {
    let ff = &f.faces[w];
    let rank = f.base.face(w).rank;
    let s = stabilize_type(&ff.ty)?;
    let lengths: Vec<AffineMap> = s
        .edge_groups
        .iter()
        .map(|grp| {
            let terms: Vec<(i64, &AffineMap)> = grp.iter().map(|&e| (1, &ff.lengths[e])).collect();
            combine(&terms)
        })
        .collect();
    let positions: Vec<&AffineMap> = s.kept_vertices.iter().map(|&v| &ff.positions[v]).collect();
    let mut rows: Vec<&AffineMap> = lengths.iter().collect();
    rows.extend(positions);
    let lift = stack(rank, &rows);
    let ty = canonical_type(&s.ty);
    let iso = find_isomorphism(&s.ty, &ty).expect("a type is isomorphic to its canonical form");
    Ok(FaceLift {
        key: canonical_form(&ty),
        lift: transport(&s.ty, &iso, &lift),
        ty,
    })
}

/// The piecewise integral affine map `α` from the base to the moduli
/// space, one lift per face. Fails when the family is invalid.
pub fn induced_alpha(f: &FamilyDatum) -> Result<InducedMap, FamilyError> {
    let report = validate_family(f);
    if let Some(v) = report.violations.first() {
        return Err(FamilyError::InvalidFamily(v.to_string()));
    }
    let faces = (0..f.base.len())
        .into_par_iter()
        .map(|w| lift_face(f, w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InducedMap { faces })
}

/// One stratum met by the image of `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageStratum {
    pub ty: CombinatorialType,
    pub key: String,
    /// Largest dimension of `α(W)` over the faces `W` mapping to the stratum.
    pub dim: usize,
    pub stratum_dim: Option<usize>,
    pub full_dimensional: bool,
    pub faces: Vec<FaceId>,
}

/// Groups faces by the stratum their interior maps to, with the dimension
/// of the image pieces.
pub fn image_strata(f: &FamilyDatum) -> Result<Vec<ImageStratum>, FamilyError> {
    let alpha = induced_alpha(f)?;
    let mut groups: BTreeMap<String, ImageStratum> = BTreeMap::new();
    for (w, fl) in alpha.faces.iter().enumerate() {
        let lin = f.base.face(w).chart.lin_space();
        let images: Vec<Vec<_>> = lin.basis().iter().map(|b| fl.lift.apply_linear(b).0).collect();
        let d = rank(&images, fl.lift.target_dim());
        let entry = match groups.entry(fl.key.clone()) {
            std::collections::btree_map::Entry::Occupied(o) => o.into_mut(),
            std::collections::btree_map::Entry::Vacant(v) => v.insert(ImageStratum {
                ty: fl.ty.clone(),
                key: fl.key.clone(),
                dim: 0,
                stratum_dim: dim_stratum(&fl.ty)?,
                full_dimensional: false,
                faces: Vec::new(),
            }),
        };
        entry.dim = entry.dim.max(d);
        entry.faces.push(w);
    }
    Ok(groups
        .into_values()
        .map(|mut s| {
            s.full_dimensional = s.stratum_dim == Some(s.dim);
            s
        })
        .collect())
}
