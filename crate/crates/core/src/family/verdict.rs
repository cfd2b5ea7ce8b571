use rayon::prelude::*;
use serde::Serialize;

use super::alpha::transport;
use super::{induced_alpha, FamilyDatum, FamilyError, InducedMap};
use crate::moduli::{canonical_form, canonical_type, classify, resolve_4valent, WallKind};
use crate::polyhedral::{harmonicity_at, FaceId, Harmonicity, HarmonicityReport, PiaMap};
use crate::tropcurve::CombinatorialType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Harmonic,
    QuasiHarmonic,
    LocallyCombinatoriallySurjective,
    Inconclusive,
}

/// A stratum adjacent to the wall and the cofacet whose image meets it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub ty: CombinatorialType,
    pub key: String,
    pub witness: Option<FaceId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallVerdict {
    pub face: FaceId,
    pub verdict: Verdict,
    pub harmonicity: Option<HarmonicityReport>,
    pub coverage: Vec<Coverage>,
    pub diagnostics: Vec<String>,
}

impl WallVerdict {
    pub fn uncovered(&self) -> Vec<&Coverage> {
        self.coverage.iter().filter(|c| c.witness.is_none()).collect()
    }

    /// Re-checks the certificate: harmonicity coefficients by substitution
    /// and coverage witnesses against the lifts of `alpha`.
    pub fn verify(&self, alpha: &InducedMap) -> bool {
        let witnesses_ok = self.coverage.iter().all(|c| {
            c.witness
                .is_none_or(|w| alpha.faces.get(w).is_some_and(|fl| fl.key == c.key))
                && canonical_form(&c.ty) == c.key
        });
        let certificate_ok = match (&self.harmonicity, self.verdict) {
            (Some(h), Verdict::Harmonic) => h.verdict == Harmonicity::Harmonic && h.verify(),
            (Some(h), Verdict::QuasiHarmonic) => h.verdict == Harmonicity::QuasiHarmonicOnly && h.verify(),
            (Some(h), Verdict::Inconclusive) => h.verdict == Harmonicity::NotQuasiHarmonic && h.verify(),
            (None, Verdict::LocallyCombinatoriallySurjective) => {
                !self.coverage.is_empty() && self.coverage.iter().all(|c| c.witness.is_some())
            }
            (None, Verdict::Inconclusive) => true,
            _ => false,
        };
        witnesses_ok && certificate_ok
    }
}

/// Decides between harmonicity of `α` at the face `w` (when every cofacet
/// maps into the same stratum as `w`) and local combinatorial surjectivity
/// (when `w` maps to a wall). Anything else is inconclusive.
pub fn wall_verdict(f: &FamilyDatum, w: FaceId) -> Result<WallVerdict, FamilyError> {
    if w >= f.base.len() {
        return Err(FamilyError::UnknownFace(w.to_string()));
    }
    let alpha = induced_alpha(f)?;
    verdict_with(f, &alpha, w)
}

/// Verdicts at every face with at least one cofacet.
pub fn wall_verdicts(f: &FamilyDatum) -> Result<Vec<WallVerdict>, FamilyError> {
    let alpha = induced_alpha(f)?;
    (0..f.base.len())
        .into_par_iter()
        .filter(|&w| !f.base.cofacets(w).is_empty())
        .map(|w| verdict_with(f, &alpha, w))
        .collect()
}

fn inconclusive(w: FaceId, diagnostic: String) -> WallVerdict {
    WallVerdict {
        face: w,
        verdict: Verdict::Inconclusive,
        harmonicity: None,
        coverage: Vec::new(),
        diagnostics: vec![diagnostic],
    }
}

pub(crate) fn verdict_with(f: &FamilyDatum, alpha: &InducedMap, w: FaceId) -> Result<WallVerdict, FamilyError> {
    let cofacets = f.base.cofacets(w);
    if cofacets.is_empty() {
        return Ok(inconclusive(w, format!("face {} has no cofacets", f.base.face(w).id)));
    }
    let here = &alpha.faces[w];
    if cofacets.iter().all(|&c| alpha.faces[c].key == here.key) {
        return harmonic_branch(f, alpha, w, &cofacets);
    }

    let class = classify(&here.ty);
    let Some(v) = class
        .four_valent_vertex
        .filter(|_| class.kind == WallKind::WeightlessAlmost3Valent)
    else {
        return Ok(inconclusive(
            w,
            format!("face {} maps to a stratum that is not a wall", f.base.face(w).id),
        ));
    };
    let mut coverage = vec![Coverage {
        ty: here.ty.clone(),
        key: here.key.clone(),
        witness: Some(w),
    }];
    for r in resolve_4valent(&here.ty, v)? {
        let ty = canonical_type(&r.ty);
        let key = canonical_form(&ty);
        let witness = cofacets.iter().copied().find(|&c| alpha.faces[c].key == key);
        coverage.push(Coverage { ty, key, witness });
    }
    let diagnostics: Vec<String> = cofacets
        .iter()
        .filter(|&&c| !coverage.iter().any(|cv| cv.key == alpha.faces[c].key))
        .map(|&c| {
            format!(
                "cofacet {} maps to a stratum not adjacent to the wall",
                f.base.face(c).id
            )
        })
        .collect();
    let verdict = if diagnostics.is_empty() && coverage.iter().all(|c| c.witness.is_some()) {
        Verdict::LocallyCombinatoriallySurjective
    } else {
        Verdict::Inconclusive
    };
    Ok(WallVerdict {
        face: w,
        verdict,
        harmonicity: None,
        coverage,
        diagnostics,
    })
}

fn harmonic_branch(
    f: &FamilyDatum,
    alpha: &InducedMap,
    w: FaceId,
    cofacets: &[FaceId],
) -> Result<WallVerdict, FamilyError> {
    let here = &alpha.faces[w];
    let mut keep = vec![w];
    keep.extend_from_slice(cofacets);
    let mut maps = vec![here.lift.clone()];
    for &c in cofacets {
        let fl = &alpha.faces[c];
        let autos = alpha.compatible_automorphisms(f, w, c).unwrap_or_default();
        let Some(g) = autos.first() else {
            return Ok(inconclusive(
                w,
                format!(
                    "no automorphism aligns the lift over {} with the one over {}",
                    f.base.face(c).id,
                    f.base.face(w).id
                ),
            ));
        };
        maps.push(transport(&fl.ty, g, &fl.lift));
    }
    let star = f.base.restrict(&keep)?;
    let m = PiaMap::new(star, here.lift.target_dim(), maps)?;
    let report = harmonicity_at(&m, 0)?;
    let (verdict, diagnostics) = match report.verdict {
        Harmonicity::Harmonic => (Verdict::Harmonic, Vec::new()),
        Harmonicity::QuasiHarmonicOnly => (Verdict::QuasiHarmonic, Vec::new()),
        Harmonicity::NotQuasiHarmonic => (
            Verdict::Inconclusive,
            vec!["no positive combination of star derivatives lies in the image span".to_string()],
        ),
    };
    Ok(WallVerdict {
        face: w,
        verdict,
        harmonicity: Some(report),
        coverage: Vec::new(),
        diagnostics,
    })
}
