use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::{Signed, Zero};

use super::complex::{Face, FaceInclusion, PolyhedralComplex};
use super::polyhedron::{Halfspace, Polyhedron};
use super::{AffineMap, PolyhedralError};
use crate::linalg::{IntMatrix, Rat, RatVector};

/// A stratum of the special fibre: the vertical components `V_S` meeting
/// in it (`|V_S| = a + 1`), the horizontal ones `H_S` (`|H_S| = b`), and
/// the length `ν(λ)` of its simplex when `a >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairStratum {
    pub id: String,
    pub vertical: BTreeSet<String>,
    pub horizontal: BTreeSet<String>,
    pub length: Option<Rat>,
}

/// Combinatorial shadow of a strictly semistable pair. `order` lists pairs
/// `(S, T)` with `S <= T`, i.e. `S` lies in the closure of `T`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemistablePairData {
    pub vertical: Vec<String>,
    pub horizontal: Vec<String>,
    pub strata: Vec<PairStratum>,
    pub order: Vec<(String, String)>,
}

impl SemistablePairData {
    /// The reflexive-transitive closure of `order` as `below[s]` = the set of
    /// strata `T >= s`, validated against the stratum data.
    pub fn closure(&self) -> Result<Vec<BTreeSet<usize>>, PolyhedralError> {
        let bad = |m: String| PolyhedralError::InconsistentStrata(m);
        let mut idx = HashMap::new();
        for (i, s) in self.strata.iter().enumerate() {
            if idx.insert(s.id.as_str(), i).is_some() {
                return Err(bad(format!("duplicate stratum `{}`", s.id)));
            }
        }
        let verticals: HashSet<&str> = self.vertical.iter().map(String::as_str).collect();
        let horizontals: HashSet<&str> = self.horizontal.iter().map(String::as_str).collect();
        if verticals.len() != self.vertical.len() || horizontals.len() != self.horizontal.len() {
            return Err(bad("duplicate component id".into()));
        }
        if verticals.iter().any(|v| horizontals.contains(v)) {
            return Err(bad("a component is both vertical and horizontal".into()));
        }
        for s in &self.strata {
            if s.vertical.is_empty() {
                return Err(bad(format!("stratum `{}` has no vertical component", s.id)));
            }
            if let Some(v) = s.vertical.iter().find(|v| !verticals.contains(v.as_str())) {
                return Err(bad(format!("stratum `{}` names unknown vertical `{v}`", s.id)));
            }
            if let Some(h) = s.horizontal.iter().find(|h| !horizontals.contains(h.as_str())) {
                return Err(bad(format!("stratum `{}` names unknown horizontal `{h}`", s.id)));
            }
            if s.vertical.len() >= 2 {
                match &s.length {
                    Some(l) if l.is_positive() => {}
                    _ => return Err(bad(format!("stratum `{}` needs a positive length", s.id))),
                }
            }
        }

        let n = self.strata.len();
        let mut up: Vec<BTreeSet<usize>> = (0..n).map(|i| BTreeSet::from([i])).collect();
        for (s, t) in &self.order {
            let lookup = |x: &str| {
                idx.get(x)
                    .copied()
                    .ok_or_else(|| bad(format!("order names unknown stratum `{x}`")))
            };
            let (s, t) = (lookup(s)?, lookup(t)?);
            up[s].insert(t);
        }
        loop {
            let mut changed = false;
            for s in 0..n {
                let reach: BTreeSet<usize> = up[s].iter().flat_map(|&t| up[t].iter().copied()).collect();
                if reach.len() > up[s].len() {
                    up[s] = reach;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        for s in 0..n {
            let ss = &self.strata[s];
            for &t in &up[s] {
                if t == s {
                    continue;
                }
                let tt = &self.strata[t];
                if up[t].contains(&s) {
                    return Err(bad(format!("order has a cycle through `{}` and `{}`", ss.id, tt.id)));
                }
                let proper = tt.vertical.is_subset(&ss.vertical)
                    && tt.horizontal.is_subset(&ss.horizontal)
                    && (tt.vertical.len(), tt.horizontal.len()) != (ss.vertical.len(), ss.horizontal.len());
                if !proper {
                    return Err(bad(format!(
                        "`{}` <= `{}` but the components of `{}` are not a proper subset",
                        ss.id, tt.id, tt.id
                    )));
                }
                if tt.vertical.len() >= 2 && ss.length != tt.length {
                    return Err(bad(format!(
                        "comparable strata `{}` and `{}` have different lengths",
                        ss.id, tt.id
                    )));
                }
            }
            // Each face of Δ_S × R^b_{>=0} must be exactly one stratum.
            let vs: Vec<&String> = ss.vertical.iter().collect();
            let hs: Vec<&String> = ss.horizontal.iter().collect();
            for vmask in 1u32..(1 << vs.len()) {
                for hmask in 0u32..(1 << hs.len()) {
                    let v: BTreeSet<String> = (0..vs.len())
                        .filter(|i| vmask >> i & 1 == 1)
                        .map(|i| vs[i].clone())
                        .collect();
                    let h: BTreeSet<String> = (0..hs.len())
                        .filter(|i| hmask >> i & 1 == 1)
                        .map(|i| hs[i].clone())
                        .collect();
                    let hits = up[s]
                        .iter()
                        .filter(|&&t| self.strata[t].vertical == v && self.strata[t].horizontal == h)
                        .count();
                    if hits != 1 {
                        return Err(bad(format!(
                            "stratum `{}` has {hits} strata above it with vertical {:?} and horizontal {:?}",
                            ss.id, v, h
                        )));
                    }
                }
            }
        }
        Ok(up)
    }
}

/// Chart coordinates of a stratum: vertical ids after the first, then
/// horizontal ids, both sorted.
fn coordinates(s: &PairStratum) -> Vec<&String> {
    s.vertical.iter().skip(1).chain(s.horizontal.iter()).collect()
}

/// `Δ(a, ν) × R^b_{>=0}`, with the first vertical coordinate eliminated
/// through `y_0 + … + y_a = ν`.
fn chart(s: &PairStratum) -> Polyhedron {
    let a = s.vertical.len() - 1;
    let n = a + s.horizontal.len();
    let mut ineqs: Vec<Halfspace> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            Halfspace::new(v, Rat::zero())
        })
        .collect();
    if a >= 1 {
        let nu = s.length.clone().expect("validated");
        let mut v = vec![0; n];
        v[..a].iter_mut().for_each(|x| *x = -1);
        ineqs.push(Halfspace::new(v, -nu));
    }
    Polyhedron::new(n, ineqs, Vec::new())
}

/// Embedding of the chart of `t` into the chart of `s` for `s <= t`.
fn embed(s: &PairStratum, t: &PairStratum) -> AffineMap {
    let target = coordinates(s);
    let pos = |id: &String| target.iter().position(|x| *x == id);
    let source = coordinates(t);
    let mut linear = IntMatrix::zeros(target.len(), source.len());
    let mut translation = RatVector::zeros(target.len());
    let t0 = t.vertical.iter().next().expect("nonempty");
    let s0 = s.vertical.iter().next().expect("nonempty");
    let shifted = if t0 != s0 { pos(t0) } else { None };
    for (j, id) in source.iter().enumerate() {
        let i = pos(id).expect("components of t are among those of s");
        linear.set(i, j, 1.into());
        if let Some(k) = shifted {
            if j < t.vertical.len() - 1 {
                linear.set(k, j, (-1).into());
            }
        }
    }
    if let Some(k) = shifted {
        // t0 is a chart coordinate of s and carries ν minus the other
        // vertical coordinates of t.
        translation.0[k] = s.length.clone().expect("s has at least two verticals");
    }
    AffineMap::new(linear, translation)
}

/// The skeleton: one face `Δ_S × R^b_{>=0}` per stratum, glued along
/// coordinate faces.
pub fn build_skeleton(d: &SemistablePairData) -> Result<PolyhedralComplex, PolyhedralError> {
    let up = d.closure()?;
    let faces = d
        .strata
        .iter()
        .map(|s| {
            let label = format!(
                "V={{{}}} H={{{}}}",
                s.vertical.iter().cloned().collect::<Vec<_>>().join(","),
                s.horizontal.iter().cloned().collect::<Vec<_>>().join(",")
            );
            Face::new(s.id.clone(), chart(s)).with_label(label)
        })
        .collect();
    let mut inclusions = Vec::new();
    for (si, ups) in up.iter().enumerate() {
        for &ti in ups {
            if ti != si {
                inclusions.push(FaceInclusion {
                    sub: ti,
                    sup: si,
                    embed: embed(&d.strata[si], &d.strata[ti]),
                });
            }
        }
    }
    PolyhedralComplex::new(faces, inclusions)
}
