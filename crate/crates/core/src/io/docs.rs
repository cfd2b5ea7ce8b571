use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{child, parse_document, rat_in, rat_out, IoError, SCHEMA};
use crate::family::{Contraction, FaceFamily, FamilyDatum};
use crate::linalg::{IntMatrix, IntVector, RatVector};
use crate::moduli::{canonical_form, EnumerationSpec};
use crate::polyhedral::{
    AffineMap, Face, FaceInclusion, Halfspace, Hyperplane, PairStratum, PolyhedralComplex, Polyhedron,
    SemistablePairData,
};
use crate::tropcurve::{CombinatorialType, Edge, Leg, ParameterizedTropicalCurve, Vertex, WeightedGraph};

fn schema() -> Option<String> {
    Some(SCHEMA.to_string())
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().expect("matrix entries fit in 64 bits")
}

fn matrix_in(rows: &[Vec<i64>], cols: usize, pointer: &str) -> Result<IntMatrix, IoError> {
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(IoError::at(child(pointer, i), format!("expected {cols} entries")));
    }
    Ok(IntMatrix::from_rows(cols, rows))
}

fn rats_in(v: &[String], pointer: &str) -> Result<RatVector, IoError> {
    v.iter()
        .enumerate()
        .map(|(i, s)| rat_in(s, &child(pointer, i)))
        .collect::<Result<Vec<_>, _>>()
        .map(RatVector)
}

fn rats_out(v: &RatVector) -> Vec<String> {
    v.0.iter().map(rat_out).collect()
}

// ---------------------------------------------------------------- complexes

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDoc {
    pub normal: Vec<i64>,
    pub offset: String,
}

/// `{x : normal·x >= offset for inequalities, normal·x = offset for equalities}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub dim: usize,
    #[serde(default)]
    pub inequalities: Vec<ConstraintDoc>,
    #[serde(default)]
    pub equalities: Vec<ConstraintDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceDoc {
    pub id: String,
    pub chart: ChartDoc,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

/// `sub ⊂ super` with the chart embedding `x ↦ linear·x + translation`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InclusionDoc {
    pub sub: String,
    #[serde(rename = "super")]
    pub sup: String,
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub faces: Vec<FaceDoc>,
    #[serde(default)]
    pub inclusions: Vec<InclusionDoc>,
}

impl ComplexDoc {
    /// Writes the faces and the covering inclusions.
    pub fn from_complex(c: &PolyhedralComplex) -> Self {
        let constraint = |normal: &IntVector, offset| ConstraintDoc {
            normal: normal.0.clone(),
            offset: rat_out(offset),
        };
        let faces = c
            .faces()
            .iter()
            .map(|f| FaceDoc {
                id: f.id.clone(),
                chart: ChartDoc {
                    dim: f.rank,
                    inequalities: f
                        .chart
                        .inequalities()
                        .iter()
                        .map(|h| constraint(&h.normal, &h.offset))
                        .collect(),
                    equalities: f
                        .chart
                        .equalities()
                        .iter()
                        .map(|h| constraint(&h.normal, &h.offset))
                        .collect(),
                },
                label: f.label.clone(),
            })
            .collect();
        let inclusions = c
            .inclusions()
            .iter()
            .filter(|inc| c.cofacets(inc.sub).contains(&inc.sup))
            .map(|inc| InclusionDoc {
                sub: c.face(inc.sub).id.clone(),
                sup: c.face(inc.sup).id.clone(),
                linear: matrix_rows(&inc.embed.linear),
                translation: rats_out(&inc.embed.translation),
            })
            .collect();
        ComplexDoc {
            schema: schema(),
            faces,
            inclusions,
        }
    }

    pub fn to_complex(&self, pointer: &str) -> Result<PolyhedralComplex, IoError> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut faces = Vec::with_capacity(self.faces.len());
        for (i, f) in self.faces.iter().enumerate() {
            let fp = child(&child(pointer, "faces"), i);
            if index.insert(f.id.as_str(), i).is_some() {
                return Err(IoError::at(child(&fp, "id"), format!("duplicate face id `{}`", f.id)));
            }
            let cp = child(&fp, "chart");
            let mut ineq = Vec::new();
            for (k, h) in f.chart.inequalities.iter().enumerate() {
                let hp = child(&child(&cp, "inequalities"), k);
                if h.normal.len() != f.chart.dim {
                    return Err(IoError::at(
                        child(&hp, "normal"),
                        format!("expected {} entries", f.chart.dim),
                    ));
                }
                ineq.push(Halfspace::new(
                    h.normal.clone(),
                    rat_in(&h.offset, &child(&hp, "offset"))?,
                ));
            }
            let mut eq = Vec::new();
            for (k, h) in f.chart.equalities.iter().enumerate() {
                let hp = child(&child(&cp, "equalities"), k);
                if h.normal.len() != f.chart.dim {
                    return Err(IoError::at(
                        child(&hp, "normal"),
                        format!("expected {} entries", f.chart.dim),
                    ));
                }
                eq.push(Hyperplane::new(
                    h.normal.clone(),
                    rat_in(&h.offset, &child(&hp, "offset"))?,
                ));
            }
            faces.push(Face::new(f.id.clone(), Polyhedron::new(f.chart.dim, ineq, eq)).with_label(f.label.clone()));
        }
        let mut inclusions = Vec::with_capacity(self.inclusions.len());
        for (i, inc) in self.inclusions.iter().enumerate() {
            let ip = child(&child(pointer, "inclusions"), i);
            let find = |id: &str, key: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| IoError::at(child(&ip, key), format!("unknown face `{id}`")))
            };
            let (sub, sup) = (find(&inc.sub, "sub")?, find(&inc.sup, "super")?);
            let (rs, rt) = (self.faces[sub].chart.dim, self.faces[sup].chart.dim);
            if inc.linear.len() != rt {
                return Err(IoError::at(child(&ip, "linear"), format!("expected {rt} rows")));
            }
            let linear = matrix_in(&inc.linear, rs, &child(&ip, "linear"))?;
            let translation = rats_in(&inc.translation, &child(&ip, "translation"))?;
            if translation.dim() != rt {
                return Err(IoError::at(child(&ip, "translation"), format!("expected {rt} entries")));
            }
            inclusions.push(FaceInclusion {
                sub,
                sup,
                embed: AffineMap::new(linear, translation),
            });
        }
        PolyhedralComplex::new(faces, inclusions).map_err(|e| IoError::at(pointer, e.to_string()))
    }
}

pub fn read_complex(text: &str) -> Result<PolyhedralComplex, IoError> {
    parse_document::<ComplexDoc>(text)?.to_complex("")
}

// ----------------------------------------------------------- semistable pairs

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairStratumDoc {
    pub id: String,
    pub vertical: Vec<String>,
    #[serde(default)]
    pub horizontal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<String>,
}

/// `order` lists pairs `[S, T]` meaning `S` lies in the closure of `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub vertical: Vec<String>,
    #[serde(default)]
    pub horizontal: Vec<String>,
    pub strata: Vec<PairStratumDoc>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
}

impl PairDoc {
    pub fn from_data(d: &SemistablePairData) -> Self {
        PairDoc {
            schema: schema(),
            vertical: d.vertical.clone(),
            horizontal: d.horizontal.clone(),
            strata: d
                .strata
                .iter()
                .map(|s| PairStratumDoc {
                    id: s.id.clone(),
                    vertical: s.vertical.iter().cloned().collect(),
                    horizontal: s.horizontal.iter().cloned().collect(),
                    length: s.length.as_ref().map(rat_out),
                })
                .collect(),
            order: d.order.clone(),
        }
    }

    pub fn to_data(&self) -> Result<SemistablePairData, IoError> {
        let strata = self
            .strata
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let length = match &s.length {
                    Some(l) => Some(rat_in(l, &child(&child("/strata", i), "length"))?),
                    None => None,
                };
                Ok(PairStratum {
                    id: s.id.clone(),
                    vertical: s.vertical.iter().cloned().collect::<BTreeSet<_>>(),
                    horizontal: s.horizontal.iter().cloned().collect(),
                    length,
                })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(SemistablePairData {
            vertical: self.vertical.clone(),
            horizontal: self.horizontal.clone(),
            strata,
            order: self.order.clone(),
        })
    }
}

pub fn read_pair(text: &str) -> Result<SemistablePairData, IoError> {
    parse_document::<PairDoc>(text)?.to_data()
}

// -------------------------------------------------------------------- types

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    #[serde(default)]
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub u: String,
    pub v: String,
    /// Slope from `u` towards `v`.
    pub slope: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegDoc {
    pub id: String,
    pub vertex: String,
    pub slope: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeDoc {
    pub dim: usize,
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub legs: Vec<LegDoc>,
}

impl TypeDoc {
    pub fn from_type(t: &CombinatorialType) -> Self {
        let g = &t.graph;
        TypeDoc {
            dim: t.dim,
            vertices: g
                .vertices
                .iter()
                .map(|v| VertexDoc {
                    id: v.id.clone(),
                    weight: v.weight,
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .zip(&t.edge_slopes)
                .map(|(e, s)| EdgeDoc {
                    id: e.id.clone(),
                    u: g.vertices[e.u].id.clone(),
                    v: g.vertices[e.v].id.clone(),
                    slope: s.0.clone(),
                })
                .collect(),
            legs: g
                .legs
                .iter()
                .zip(&t.leg_slopes)
                .map(|(l, s)| LegDoc {
                    id: l.id.clone(),
                    vertex: g.vertices[l.vertex].id.clone(),
                    slope: s.0.clone(),
                })
                .collect(),
        }
    }

    pub fn to_type(&self, pointer: &str) -> Result<CombinatorialType, IoError> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut ids: BTreeSet<&str> = BTreeSet::new();
        let mut vertices = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.id.as_str(), i).is_some() {
                return Err(IoError::at(
                    child(&child(&child(pointer, "vertices"), i), "id"),
                    format!("duplicate id `{}`", v.id),
                ));
            }
            vertices.push(Vertex {
                id: v.id.clone(),
                weight: v.weight,
            });
        }
        let slope = |s: &[i64], p: String| {
            if s.len() == self.dim {
                Ok(IntVector(s.to_vec()))
            } else {
                Err(IoError::at(p, format!("expected {} entries", self.dim)))
            }
        };
        let vertex = |id: &str, p: String| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| IoError::at(p, format!("unknown vertex `{id}`")))
        };
        let mut edges = Vec::new();
        let mut edge_slopes = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let ep = child(&child(pointer, "edges"), i);
            if !ids.insert(e.id.as_str()) {
                return Err(IoError::at(child(&ep, "id"), format!("duplicate id `{}`", e.id)));
            }
            edges.push(Edge {
                id: e.id.clone(),
                u: vertex(&e.u, child(&ep, "u"))?,
                v: vertex(&e.v, child(&ep, "v"))?,
            });
            edge_slopes.push(slope(&e.slope, child(&ep, "slope"))?);
        }
        let mut legs = Vec::new();
        let mut leg_slopes = Vec::new();
        for (i, l) in self.legs.iter().enumerate() {
            let lp = child(&child(pointer, "legs"), i);
            if !ids.insert(l.id.as_str()) {
                return Err(IoError::at(child(&lp, "id"), format!("duplicate id `{}`", l.id)));
            }
            legs.push(Leg {
                id: l.id.clone(),
                vertex: vertex(&l.vertex, child(&lp, "vertex"))?,
            });
            leg_slopes.push(slope(&l.slope, child(&lp, "slope"))?);
        }
        let graph = WeightedGraph::new(vertices, edges, legs).map_err(|e| IoError::at(pointer, e.to_string()))?;
        CombinatorialType::new(graph, edge_slopes, leg_slopes, self.dim)
            .map_err(|e| IoError::at(pointer, e.to_string()))
    }
}

/// A type with its canonical string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
    #[serde(rename = "type")]
    pub ty: TypeDoc,
}

impl TypeEntry {
    pub fn new(t: &CombinatorialType) -> Self {
        TypeEntry {
            canonical: Some(canonical_form(t)),
            ty: TypeDoc::from_type(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeFileDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(rename = "type")]
    pub ty: TypeDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypesDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub types: Vec<TypeEntry>,
}

impl TypesDoc {
    pub fn new(types: &[CombinatorialType]) -> Self {
        TypesDoc {
            schema: schema(),
            types: types.iter().map(TypeEntry::new).collect(),
        }
    }

    pub fn to_types(&self) -> Result<Vec<CombinatorialType>, IoError> {
        self.types
            .iter()
            .enumerate()
            .map(|(i, t)| t.ty.to_type(&child(&child("/types", i), "type")))
            .collect()
    }
}

pub fn read_type(text: &str) -> Result<CombinatorialType, IoError> {
    parse_document::<TypeFileDoc>(text)?.ty.to_type("/type")
}

pub fn read_types(text: &str) -> Result<Vec<CombinatorialType>, IoError> {
    parse_document::<TypesDoc>(text)?.to_types()
}

/// Seeds for closure propagation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub seeds: Vec<TypeEntry>,
}

pub fn read_seeds(text: &str) -> Result<Vec<CombinatorialType>, IoError> {
    parse_document::<SeedsDoc>(text)?
        .seeds
        .iter()
        .enumerate()
        .map(|(i, t)| t.ty.to_type(&child(&child("/seeds", i), "type")))
        .collect()
}

// ------------------------------------------------------------------- curves

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(rename = "type")]
    pub ty: TypeDoc,
    #[serde(default)]
    pub lengths: BTreeMap<String, String>,
    #[serde(default)]
    pub positions: BTreeMap<String, Vec<String>>,
}

impl CurveDoc {
    pub fn from_curve(p: &ParameterizedTropicalCurve) -> Self {
        let g = &p.ty.graph;
        CurveDoc {
            schema: schema(),
            ty: TypeDoc::from_type(&p.ty),
            lengths: g
                .edges
                .iter()
                .zip(&p.lengths)
                .map(|(e, l)| (e.id.clone(), rat_out(l)))
                .collect(),
            positions: g
                .vertices
                .iter()
                .zip(&p.positions)
                .map(|(v, h)| (v.id.clone(), rats_out(h)))
                .collect(),
        }
    }

    pub fn to_curve(&self) -> Result<ParameterizedTropicalCurve, IoError> {
        let ty = self.ty.to_type("/type")?;
        let g = &ty.graph;
        let lengths = g
            .edges
            .iter()
            .map(|e| {
                let p = child("/lengths", &e.id);
                let s = self
                    .lengths
                    .get(&e.id)
                    .ok_or_else(|| IoError::at(&p, "missing length"))?;
                rat_in(s, &p)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let positions = g
            .vertices
            .iter()
            .map(|v| {
                let p = child("/positions", &v.id);
                let s = self
                    .positions
                    .get(&v.id)
                    .ok_or_else(|| IoError::at(&p, "missing position"))?;
                let h = rats_in(s, &p)?;
                if h.dim() != ty.dim {
                    return Err(IoError::at(p, format!("expected {} entries", ty.dim)));
                }
                Ok(h)
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(k) = self.lengths.keys().find(|k| g.edge_index(k).is_none()) {
            return Err(IoError::at(child("/lengths", k), "no such edge"));
        }
        if let Some(k) = self.positions.keys().find(|k| g.vertex_index(k).is_none()) {
            return Err(IoError::at(child("/positions", k), "no such vertex"));
        }
        ParameterizedTropicalCurve::new(ty, lengths, positions).map_err(|e| IoError::at("", e.to_string()))
    }
}

pub fn read_curve(text: &str) -> Result<ParameterizedTropicalCurve, IoError> {
    parse_document::<CurveDoc>(text)?.to_curve()
}

// -------------------------------------------------------------- enumeration

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub genus: u32,
    #[serde(default)]
    pub contracted: usize,
    pub degree: Vec<Vec<i64>>,
    pub max_edges: usize,
}

pub fn read_enumeration(text: &str) -> Result<EnumerationSpec, IoError> {
    let d: EnumerationDoc = parse_document(text)?;
    let dim = d.degree.first().map_or(0, Vec::len);
    if let Some(i) = d.degree.iter().position(|s| s.len() != dim) {
        return Err(IoError::at(child("/degree", i), format!("expected {dim} entries")));
    }
    Ok(EnumerationSpec {
        genus: d.genus,
        contracted: d.contracted,
        degree: d.degree.into_iter().map(IntVector).collect(),
        max_edges: d.max_edges,
    })
}

// ----------------------------------------------------------------- families

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthFnDoc {
    pub linear: Vec<i64>,
    pub offset: String,
}

/// `linear` has one row per coordinate of `N`, each with one entry per
/// chart coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionFnDoc {
    pub linear: Vec<Vec<i64>>,
    pub offset: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFaceDoc {
    pub face: String,
    #[serde(rename = "type")]
    pub ty: TypeDoc,
    #[serde(default)]
    pub lengths: BTreeMap<String, LengthFnDoc>,
    pub positions: BTreeMap<String, PositionFnDoc>,
}

/// Maps vertices and edges of the type over `super` to the type over `sub`;
/// a `null` edge image marks a contracted edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionDoc {
    pub sub: String,
    #[serde(rename = "super")]
    pub sup: String,
    pub vertex_map: BTreeMap<String, String>,
    #[serde(default)]
    pub edge_map: BTreeMap<String, Option<String>>,
}

/// The base complex, inline or as a path relative to the family document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseDoc {
    Inline(ComplexDoc),
    Path(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub base: BaseDoc,
    pub extended_degree: Vec<Vec<i64>>,
    pub faces: Vec<FamilyFaceDoc>,
    #[serde(default)]
    pub contractions: Vec<ContractionDoc>,
}

fn affine_rows(m: &AffineMap) -> (Vec<Vec<i64>>, Vec<String>) {
    (matrix_rows(&m.linear), rats_out(&m.translation))
}

impl FamilyDoc {
    pub fn from_family(f: &FamilyDatum) -> Self {
        let faces = f
            .faces
            .iter()
            .enumerate()
            .map(|(w, ff)| {
                let g = &ff.ty.graph;
                FamilyFaceDoc {
                    face: f.base.face(w).id.clone(),
                    ty: TypeDoc::from_type(&ff.ty),
                    lengths: g
                        .edges
                        .iter()
                        .zip(&ff.lengths)
                        .map(|(e, l)| {
                            let (rows, offset) = affine_rows(l);
                            (
                                e.id.clone(),
                                LengthFnDoc {
                                    linear: rows.into_iter().next().unwrap_or_default(),
                                    offset: offset[0].clone(),
                                },
                            )
                        })
                        .collect(),
                    positions: g
                        .vertices
                        .iter()
                        .zip(&ff.positions)
                        .map(|(v, h)| {
                            let (linear, offset) = affine_rows(h);
                            (v.id.clone(), PositionFnDoc { linear, offset })
                        })
                        .collect(),
                }
            })
            .collect();
        let contractions = f
            .contractions
            .iter()
            .map(|c| {
                let (gs, gt) = (&f.faces[c.sup].ty.graph, &f.faces[c.sub].ty.graph);
                ContractionDoc {
                    sub: f.base.face(c.sub).id.clone(),
                    sup: f.base.face(c.sup).id.clone(),
                    vertex_map: c
                        .vertex_map
                        .iter()
                        .enumerate()
                        .map(|(v, &x)| (gs.vertices[v].id.clone(), gt.vertices[x].id.clone()))
                        .collect(),
                    edge_map: c
                        .edge_map
                        .iter()
                        .enumerate()
                        .map(|(e, x)| (gs.edges[e].id.clone(), x.map(|x| gt.edges[x].id.clone())))
                        .collect(),
                }
            })
            .collect();
        FamilyDoc {
            schema: schema(),
            base: BaseDoc::Inline(ComplexDoc {
                schema: None,
                ..ComplexDoc::from_complex(&f.base)
            }),
            extended_degree: f.extended_degree.iter().map(|s| s.0.clone()).collect(),
            faces,
            contractions,
        }
    }

    /// Builds the family; a base given as a path is read relative to `dir`.
    pub fn to_family(&self, dir: Option<&Path>) -> Result<FamilyDatum, IoError> {
        let base = match &self.base {
            BaseDoc::Inline(c) => c.to_complex("/base")?,
            BaseDoc::Path(p) => {
                let path = dir.map_or_else(|| Path::new(p).to_path_buf(), |d| d.join(p));
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| IoError::at("/base", format!("cannot read {}: {e}", path.display())))?;
                read_complex(&text).map_err(|e| IoError::at("/base", format!("{}: {e}", path.display())))?
            }
        };
        let mut slots: Vec<Option<FaceFamily>> = vec![None; base.len()];
        for (i, fd) in self.faces.iter().enumerate() {
            let fp = child("/faces", i);
            let w = base
                .index_of(&fd.face)
                .map_err(|_| IoError::at(child(&fp, "face"), format!("unknown face `{}`", fd.face)))?;
            if slots[w].is_some() {
                return Err(IoError::at(
                    child(&fp, "face"),
                    format!("face `{}` listed twice", fd.face),
                ));
            }
            let rank = base.face(w).rank;
            let ty = fd.ty.to_type(&child(&fp, "type"))?;
            let g = &ty.graph;
            let mut lengths = Vec::new();
            for e in &g.edges {
                let p = child(&child(&fp, "lengths"), &e.id);
                let l = fd
                    .lengths
                    .get(&e.id)
                    .ok_or_else(|| IoError::at(&p, "missing length function"))?;
                let linear = matrix_in(std::slice::from_ref(&l.linear), rank, &child(&p, "linear"))?;
                lengths.push(AffineMap::new(
                    linear,
                    RatVector(vec![rat_in(&l.offset, &child(&p, "offset"))?]),
                ));
            }
            let mut positions = Vec::new();
            for v in &g.vertices {
                let p = child(&child(&fp, "positions"), &v.id);
                let h = fd
                    .positions
                    .get(&v.id)
                    .ok_or_else(|| IoError::at(&p, "missing position function"))?;
                if h.linear.len() != ty.dim {
                    return Err(IoError::at(child(&p, "linear"), format!("expected {} rows", ty.dim)));
                }
                let linear = matrix_in(&h.linear, rank, &child(&p, "linear"))?;
                let offset = rats_in(&h.offset, &child(&p, "offset"))?;
                if offset.dim() != ty.dim {
                    return Err(IoError::at(child(&p, "offset"), format!("expected {} entries", ty.dim)));
                }
                positions.push(AffineMap::new(linear, offset));
            }
            if let Some(k) = fd.lengths.keys().find(|k| g.edge_index(k).is_none()) {
                return Err(IoError::at(child(&child(&fp, "lengths"), k), "no such edge"));
            }
            if let Some(k) = fd.positions.keys().find(|k| g.vertex_index(k).is_none()) {
                return Err(IoError::at(child(&child(&fp, "positions"), k), "no such vertex"));
            }
            slots[w] = Some(FaceFamily { ty, lengths, positions });
        }
        let faces = slots
            .into_iter()
            .enumerate()
            .map(|(w, s)| s.ok_or_else(|| IoError::at("/faces", format!("no data for face `{}`", base.face(w).id))))
            .collect::<Result<Vec<_>, _>>()?;

        let mut contractions = Vec::new();
        for (i, cd) in self.contractions.iter().enumerate() {
            let cp = child("/contractions", i);
            let face = |id: &str, key: &str| {
                base.index_of(id)
                    .map_err(|_| IoError::at(child(&cp, key), format!("unknown face `{id}`")))
            };
            let (sub, sup) = (face(&cd.sub, "sub")?, face(&cd.sup, "super")?);
            let (gs, gt) = (&faces[sup].ty.graph, &faces[sub].ty.graph);
            let vertex_map = gs
                .vertices
                .iter()
                .map(|v| {
                    let p = child(&child(&cp, "vertex_map"), &v.id);
                    let x = cd
                        .vertex_map
                        .get(&v.id)
                        .ok_or_else(|| IoError::at(&p, "missing image"))?;
                    gt.vertex_index(x)
                        .ok_or_else(|| IoError::at(&p, format!("unknown vertex `{x}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let edge_map = gs
                .edges
                .iter()
                .map(|e| {
                    let p = child(&child(&cp, "edge_map"), &e.id);
                    match cd.edge_map.get(&e.id) {
                        None => Err(IoError::at(&p, "missing image")),
                        Some(None) => Ok(None),
                        Some(Some(x)) => gt
                            .edge_index(x)
                            .map(Some)
                            .ok_or_else(|| IoError::at(&p, format!("unknown edge `{x}`"))),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            contractions.push(Contraction {
                sub,
                sup,
                vertex_map,
                edge_map,
            });
        }
        let extended_degree = self.extended_degree.iter().cloned().map(IntVector).collect();
        FamilyDatum::new(base, extended_degree, faces, contractions).map_err(|e| IoError::at("", e.to_string()))
    }
}

pub fn read_family(text: &str, dir: Option<&Path>) -> Result<FamilyDatum, IoError> {
    parse_document::<FamilyDoc>(text)?.to_family(dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::fixtures::*;
    use crate::family::validate_family;
    use crate::polyhedral::validate_complex;
    use crate::tropcurve::realize;

    #[test]
    fn family_round_trip() {
        for f in [point_family(), ray_family(0), three_ray_family(), two_ray_family()] {
            let text = super::super::to_json(&FamilyDoc::from_family(&f));
            let g = read_family(&text, None).unwrap();
            assert_eq!(g.faces, f.faces);
            assert_eq!(g.contractions, f.contractions);
            assert!(validate_family(&g).is_valid());
        }
    }

    #[test]
    fn complex_round_trip() {
        let c = rays(3);
        let text = super::super::to_json(&ComplexDoc::from_complex(&c));
        let d = read_complex(&text).unwrap();
        assert_eq!(d.faces(), c.faces());
        assert_eq!(d.inclusions(), c.inclusions());
        assert!(validate_complex(&d).is_valid());
    }

    #[test]
    fn curve_round_trip_and_pointers() {
        let ty = resolution_face(0, 1, 0).ty;
        let p = realize(&ty, &[crate::linalg::ratio(3, 2)], &RatVector::zeros(2)).unwrap();
        let doc = CurveDoc::from_curve(&p);
        let text = super::super::to_json(&doc);
        assert!(text.contains("\"3/2\""));
        assert_eq!(read_curve(&text).unwrap(), p);

        let mut bad = doc.clone();
        bad.lengths.insert("e".into(), "x".into());
        let e = read_curve(&super::super::to_json(&bad)).unwrap_err();
        assert_eq!(e.pointer, "/lengths/e");

        let mut bad = doc;
        bad.ty.edges[0].u = "nope".into();
        let e = read_curve(&super::super::to_json(&bad)).unwrap_err();
        assert_eq!(e.pointer, "/type/edges/0/u");

        let e = read_curve(r#"{"schema":"tropmoduli/1","type":{"dim":2,"vertices":[{"id":"v","weight":"x"}]}}"#)
            .unwrap_err();
        assert_eq!(e.pointer, "/type/vertices/0/weight");
    }
}
