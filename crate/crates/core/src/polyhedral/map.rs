use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::complex::{chart_lin, FaceId, PolyhedralComplex};
use super::{AffineMap, PolyhedralError};
use crate::linalg::{
    smith_normal_form, span_membership, strict_positive_combination, IntMatrix, IntVector, Rat, RatVector, Subspace,
};

/// Direction of a cofacet `W_i ⊇ W`: the generator `ē` of `N_{W_i}/N_W`
/// pointing into `W_i`, and a functional `φ` on `N_{W_i}` with kernel
/// `N_W` and `φ(ē) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarDirection {
    pub cofacet: FaceId,
    pub primitive: IntVector,
    pub functional: IntVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarData {
    pub face: FaceId,
    pub directions: Vec<StarDirection>,
}

fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("lattice coordinate exceeds 64 bits")
}

/// Reduces `v` modulo the column lattice of `l` (column Hermite form), so
/// that the representative is small and canonical.
fn reduce_mod_columns(l: &IntMatrix, v: &mut [BigInt]) {
    let m = l.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..l.cols()).map(|j| l.column(j)).collect();
    let mut k = 0;
    for i in 0..m {
        if k == cols.len() {
            break;
        }
        // Euclid on row i across columns k.. until one nonzero entry remains.
        loop {
            let nonzero: Vec<usize> = (k..cols.len()).filter(|&j| !cols[j][i].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&j) = nonzero.first() {
                    cols.swap(k, j);
                }
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&j| cols[j][i].abs()).expect("nonempty");
            for &j in &nonzero {
                if j != p {
                    let q = cols[j][i].div_floor(&cols[p][i]);
                    let pivot = cols[p].clone();
                    for (x, y) in cols[j].iter_mut().zip(&pivot) {
                        *x -= &q * y;
                    }
                }
            }
        }
        if cols[k][i].is_zero() {
            continue;
        }
        if cols[k][i].is_negative() {
            for x in cols[k].iter_mut() {
                *x = -x.clone();
            }
        }
        let q = v[i].div_floor(&cols[k][i]);
        for (x, y) in v.iter_mut().zip(&cols[k]) {
            *x -= &q * y;
        }
        k += 1;
    }
}

/// `Star(W)`: one primitive direction per codimension-one cofacet.
pub fn star(c: &PolyhedralComplex, w: FaceId) -> Result<StarData, PolyhedralError> {
    c.check_face(w)?;
    let face = c.face(w);
    let base_point = face
        .chart
        .relative_interior_point()
        .ok_or_else(|| PolyhedralError::MalformedMap {
            face: face.id.clone(),
            detail: "chart is empty".into(),
        })?;
    let mut directions = Vec::new();
    for cofacet in c.cofacets(w) {
        let inc = c.inclusion(w, cofacet).expect("cofacets come from inclusions");
        let big = c.face(cofacet);
        let r = face.rank;
        let smith = smith_normal_form(&inc.embed.linear);
        let divisors = smith.elementary_divisors();
        if divisors.len() != r || divisors.iter().any(|d| !d.is_one()) {
            return Err(PolyhedralError::MalformedInclusion {
                sub: face.id.clone(),
                sup: big.id.clone(),
                detail: "linear part is not a saturated embedding".into(),
            });
        }
        let mut functional: Vec<BigInt> = smith.u.row(r).to_vec();
        // ē solves U ē = e_r.
        let u_rows = smith.u.to_rat_rows();
        let mut rhs = vec![Rat::zero(); r + 1];
        rhs[r] = Rat::one();
        let e = crate::linalg::solve(&u_rows, &rhs, r + 1).expect("unimodular matrices are invertible");
        let mut e: Vec<BigInt> = e.iter().map(|x| x.to_integer()).collect();

        let inside = big
            .chart
            .relative_interior_point()
            .ok_or_else(|| PolyhedralError::MalformedMap {
                face: big.id.clone(),
                detail: "chart is empty".into(),
            })?;
        let offset = &inside - &inc.embed.apply(&base_point);
        let side: Rat = functional
            .iter()
            .zip(&offset.0)
            .map(|(f, x)| Rat::from_integer(f.clone()) * x)
            .sum();
        if side.is_negative() {
            functional.iter_mut().for_each(|x| *x = -x.clone());
            e.iter_mut().for_each(|x| *x = -x.clone());
        }
        reduce_mod_columns(&inc.embed.linear, &mut e);
        directions.push(StarDirection {
            cofacet,
            primitive: IntVector(e.iter().map(to_i64).collect()),
            functional: IntVector(functional.iter().map(to_i64).collect()),
        });
    }
    Ok(StarData { face: w, directions })
}

/// A piecewise integral affine map `β: Λ → R^target_dim`, one affine map
/// per face in that face's chart coordinates.
#[derive(Clone, Debug)]
pub struct PiaMap {
    pub source: PolyhedralComplex,
    pub target_dim: usize,
    pub per_face: Vec<AffineMap>,
}

impl PiaMap {
    /// Checks shapes and compatibility along every inclusion.
    pub fn new(
        source: PolyhedralComplex,
        target_dim: usize,
        per_face: Vec<AffineMap>,
    ) -> Result<Self, PolyhedralError> {
        let map = PiaMap::new_unchecked(source, target_dim, per_face)?;
        if let Some(&(sub, sup)) = map.incompatible_inclusions().first() {
            return Err(PolyhedralError::MalformedMap {
                face: map.source.face(sub).id.clone(),
                detail: format!("disagrees with the map on `{}`", map.source.face(sup).id),
            });
        }
        Ok(map)
    }

    /// Checks shapes only.
    pub fn new_unchecked(
        source: PolyhedralComplex,
        target_dim: usize,
        per_face: Vec<AffineMap>,
    ) -> Result<Self, PolyhedralError> {
        if per_face.len() != source.len() {
            return Err(PolyhedralError::MalformedMap {
                face: String::from("*"),
                detail: format!("{} maps for {} faces", per_face.len(), source.len()),
            });
        }
        for (face, f) in source.faces().iter().zip(&per_face) {
            if f.source_dim() != face.rank || f.target_dim() != target_dim {
                return Err(PolyhedralError::MalformedMap {
                    face: face.id.clone(),
                    detail: format!(
                        "map is {}x{}, expected {}x{}",
                        f.target_dim(),
                        f.source_dim(),
                        target_dim,
                        face.rank
                    ),
                });
            }
        }
        Ok(PiaMap {
            source,
            target_dim,
            per_face,
        })
    }

    /// Inclusions `(sub, sup)` where `β_sup ∘ embed ≠ β_sub`.
    pub fn incompatible_inclusions(&self) -> Vec<(FaceId, FaceId)> {
        self.source
            .inclusions()
            .iter()
            .filter(|inc| self.per_face[inc.sup].compose(&inc.embed) != self.per_face[inc.sub])
            .map(|inc| (inc.sub, inc.sup))
            .collect()
    }

    pub fn eval(&self, w: FaceId, x: &RatVector) -> RatVector {
        self.per_face[w].apply(x)
    }
}

/// `Lin(β(W))`.
pub fn lin_of_image(m: &PiaMap, w: FaceId) -> Result<Subspace, PolyhedralError> {
    m.source.check_face(w)?;
    let lin = chart_lin(m.source.face(w));
    let image: Vec<RatVector> = lin.basis().iter().map(|b| m.per_face[w].apply_linear(b)).collect();
    Ok(Subspace::span(m.target_dim, image)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Harmonicity {
    Harmonic,
    QuasiHarmonicOnly,
    NotQuasiHarmonic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicityReport {
    pub verdict: Harmonicity,
    /// `∂β/∂ē_i`, in star order.
    pub derivatives: Vec<RatVector>,
    /// Positive integer coefficients `a_i` when (quasi-)harmonic.
    pub certificate: Option<Vec<BigInt>>,
    pub image_span: Subspace,
}

impl HarmonicityReport {
    /// Re-checks the certificate by substitution.
    pub fn verify(&self) -> bool {
        match &self.certificate {
            None => self.verdict == Harmonicity::NotQuasiHarmonic,
            Some(a) => {
                if a.len() != self.derivatives.len() || a.iter().any(|x| !x.is_positive()) {
                    return false;
                }
                if self.verdict == Harmonicity::Harmonic && a.iter().any(|x| !x.is_one()) {
                    return false;
                }
                let mut sum = RatVector::zeros(self.image_span.ambient_dim());
                for (k, d) in a.iter().zip(&self.derivatives) {
                    sum.add_scaled(&Rat::from_integer(k.clone()), d);
                }
                span_membership(&sum, &self.image_span).unwrap_or(false)
            }
        }
    }
}

/// Classifies `β` at `W`: harmonic when the plain sum of star derivatives
/// lies in `Lin(β(W))`, quasi-harmonic when some positive integer
/// combination does.
pub fn harmonicity_at(m: &PiaMap, w: FaceId) -> Result<HarmonicityReport, PolyhedralError> {
    let star = star(&m.source, w)?;
    if star.directions.is_empty() {
        return Err(PolyhedralError::NoCofacets(m.source.face(w).id.clone()));
    }
    let image_span = lin_of_image(m, w)?;
    let derivatives: Vec<RatVector> = star
        .directions
        .iter()
        .map(|d| m.per_face[d.cofacet].apply_linear(&d.primitive.to_rat()))
        .collect();
    let mut sum = RatVector::zeros(m.target_dim);
    for d in &derivatives {
        sum = &sum + d;
    }
    let (verdict, certificate) = if span_membership(&sum, &image_span)? {
        (Harmonicity::Harmonic, Some(vec![BigInt::one(); derivatives.len()]))
    } else {
        match strict_positive_combination(&derivatives, &image_span)? {
            Some(a) => (Harmonicity::QuasiHarmonicOnly, Some(a)),
            None => (Harmonicity::NotQuasiHarmonic, None),
        }
    };
    Ok(HarmonicityReport {
        verdict,
        derivatives,
        certificate,
        image_span,
    })
}
