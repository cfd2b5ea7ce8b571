use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::ToPrimitive;

use super::polyhedron::{PolyFace, Polyhedron};
use super::{AffineMap, PolyhedralError};
use crate::linalg::{is_saturated, IntVector, LinalgError, RatVector, Subspace};
use crate::report::ValidationReport;

pub type FaceId = usize;

/// A face `W` with its chart `μ_W(W) ⊆ N_W ⊗ R`, where `N_W = Z^rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: String,
    pub rank: usize,
    pub chart: Polyhedron,
    pub label: String,
}

impl Face {
    pub fn new(id: impl Into<String>, chart: Polyhedron) -> Self {
        Face {
            id: id.into(),
            rank: chart.ambient_dim(),
            chart,
            label: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// `sub ⊂ sup`, with the chart embedding `μ_sup ∘ μ_sub^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceInclusion {
    pub sub: FaceId,
    pub sup: FaceId,
    pub embed: AffineMap,
}

#[derive(Clone, Debug)]
pub struct PolyhedralComplex {
    faces: Vec<Face>,
    inclusions: Vec<FaceInclusion>,
    by_pair: HashMap<(FaceId, FaceId), usize>,
    index: HashMap<String, FaceId>,
    conflicts: Vec<(FaceId, FaceId)>,
}

impl PolyhedralComplex {
    /// Builds the complex and closes the inclusion relation under
    /// composition. Inclusions may list only covering relations.
    pub fn new(faces: Vec<Face>, inclusions: Vec<FaceInclusion>) -> Result<Self, PolyhedralError> {
        let mut index = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            if index.insert(f.id.clone(), i).is_some() {
                return Err(PolyhedralError::DuplicateFace(f.id.clone()));
            }
        }
        let name = |i: FaceId| faces.get(i).map_or_else(|| format!("#{i}"), |f| f.id.clone());
        let mut pairs: BTreeMap<(FaceId, FaceId), AffineMap> = BTreeMap::new();
        let mut conflicts = BTreeSet::new();
        for inc in inclusions {
            for end in [inc.sub, inc.sup] {
                if end >= faces.len() {
                    return Err(PolyhedralError::UnknownFace(format!("#{end}")));
                }
            }
            let malformed = |detail: String| PolyhedralError::MalformedInclusion {
                sub: name(inc.sub),
                sup: name(inc.sup),
                detail,
            };
            if inc.sub == inc.sup {
                return Err(malformed("a face cannot include itself".into()));
            }
            if inc.embed.source_dim() != faces[inc.sub].rank || inc.embed.target_dim() != faces[inc.sup].rank {
                return Err(malformed(format!(
                    "embedding is {}x{}, ranks are {} and {}",
                    inc.embed.target_dim(),
                    inc.embed.source_dim(),
                    faces[inc.sub].rank,
                    faces[inc.sup].rank
                )));
            }
            match pairs.get(&(inc.sub, inc.sup)) {
                Some(existing) if *existing != inc.embed => {
                    conflicts.insert((inc.sub, inc.sup));
                }
                Some(_) => {}
                None => {
                    pairs.insert((inc.sub, inc.sup), inc.embed);
                }
            }
        }

        loop {
            let mut added = Vec::new();
            for (&(a, b), ab) in &pairs {
                for (&(b2, c), bc) in pairs.range((b, 0)..(b + 1, 0)) {
                    debug_assert_eq!(b, b2);
                    if a == c {
                        return Err(PolyhedralError::InclusionCycle(name(a)));
                    }
                    let composed = bc.compose(ab);
                    match pairs.get(&(a, c)) {
                        Some(existing) if *existing != composed => {
                            conflicts.insert((a, c));
                        }
                        Some(_) => {}
                        None => added.push(((a, c), composed)),
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            for (k, v) in added {
                pairs.entry(k).or_insert(v);
            }
        }

        let inclusions: Vec<FaceInclusion> = pairs
            .into_iter()
            .map(|((sub, sup), embed)| FaceInclusion { sub, sup, embed })
            .collect();
        let by_pair = inclusions
            .iter()
            .enumerate()
            .map(|(i, inc)| ((inc.sub, inc.sup), i))
            .collect();
        Ok(PolyhedralComplex {
            faces,
            inclusions,
            by_pair,
            index,
            conflicts: conflicts.into_iter().collect(),
        })
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, w: FaceId) -> &Face {
        &self.faces[w]
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<FaceId, PolyhedralError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| PolyhedralError::UnknownFace(id.to_string()))
    }

    pub(crate) fn check_face(&self, w: FaceId) -> Result<(), PolyhedralError> {
        if w < self.faces.len() {
            Ok(())
        } else {
            Err(PolyhedralError::UnknownFace(format!("#{w}")))
        }
    }

    /// All inclusions, transitively closed, sorted by `(sub, sup)`.
    pub fn inclusions(&self) -> &[FaceInclusion] {
        &self.inclusions
    }

    pub fn inclusion(&self, sub: FaceId, sup: FaceId) -> Option<&FaceInclusion> {
        self.by_pair.get(&(sub, sup)).map(|&i| &self.inclusions[i])
    }

    /// Proper faces of `w`.
    pub fn subfaces(&self, w: FaceId) -> Vec<FaceId> {
        self.inclusions.iter().filter(|i| i.sup == w).map(|i| i.sub).collect()
    }

    /// Faces properly containing `w`.
    pub fn superfaces(&self, w: FaceId) -> Vec<FaceId> {
        self.inclusions.iter().filter(|i| i.sub == w).map(|i| i.sup).collect()
    }

    /// Faces containing `w` with codimension one.
    pub fn cofacets(&self, w: FaceId) -> Vec<FaceId> {
        let r = self.faces[w].rank;
        self.superfaces(w)
            .into_iter()
            .filter(|&s| self.faces[s].rank == r + 1)
            .collect()
    }

    pub fn maximal_faces(&self) -> Vec<FaceId> {
        (0..self.faces.len())
            .filter(|&w| self.superfaces(w).is_empty())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.faces.iter().map(|f| f.rank).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.faces.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.faces.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut x = x;
            while p[x] != r {
                let n = p[x];
                p[x] = r;
                x = n;
            }
            r
        }
        for inc in &self.inclusions {
            let (a, b) = (find(&mut parent, inc.sub), find(&mut parent, inc.sup));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..self.faces.len()).all(|i| find(&mut parent, i) == root)
    }

    /// Sub-complex on the given faces (and the inclusions among them).
    pub fn restrict(&self, keep: &[FaceId]) -> Result<PolyhedralComplex, PolyhedralError> {
        let pos: HashMap<FaceId, usize> = keep.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let faces = keep.iter().map(|&w| self.faces[w].clone()).collect();
        let inclusions = self
            .inclusions
            .iter()
            .filter_map(|inc| {
                Some(FaceInclusion {
                    sub: *pos.get(&inc.sub)?,
                    sup: *pos.get(&inc.sup)?,
                    embed: inc.embed.clone(),
                })
            })
            .collect();
        PolyhedralComplex::new(faces, inclusions)
    }

    /// Composition conflicts found while closing the inclusion relation.
    pub fn conflicts(&self) -> &[(FaceId, FaceId)] {
        &self.conflicts
    }

    fn inclusion_name(&self, sub: FaceId, sup: FaceId) -> String {
        format!("inclusion {}->{}", self.faces[sub].id, self.faces[sup].id)
    }
}

fn chart_ok(face: &Face) -> bool {
    face.chart.ambient_dim() == face.rank && face.chart.dim() == Some(face.rank)
}

/// Whether the image of `sub`'s chart under `embed` covers every generator
/// of the face `target` of `sup_chart`.
fn image_covers(sub_chart: &Polyhedron, embed: &AffineMap, sup_chart: &Polyhedron, target: &PolyFace) -> bool {
    let g = sup_chart.generators();
    let linear_only = AffineMap::new(embed.linear.clone(), RatVector::zeros(embed.target_dim()));
    let covers_point = |p: &RatVector| embed.preimage(p).is_some_and(|x| sub_chart.contains(&x));
    let covers_dir = |d: &RatVector| linear_only.preimage(d).is_some_and(|x| sub_chart.recedes_along(&x));
    target.vertices.iter().all(|&v| covers_point(&g.vertices[v]))
        && target.rays.iter().all(|&r| covers_dir(&g.rays[r]))
        && g.lines.iter().all(|l| covers_dir(l) && covers_dir(&-l))
}

/// Checks the polyhedral-complex axioms: lattice ranks and chart
/// dimensions (1)-(2), chart boundaries covered exactly once by subfaces
/// (3), consistent gluing (4), saturated inclusion lattices (5), and
/// connectedness.
pub fn validate_complex(c: &PolyhedralComplex) -> ValidationReport {
    let mut report = ValidationReport::default();
    if c.faces.is_empty() {
        report.push("CONNECTED", "complex", "complex has no faces");
        return report;
    }

    for f in &c.faces {
        let loc = format!("face {}", f.id);
        if f.chart.ambient_dim() != f.rank {
            report.push(
                "AXIOM(2)",
                loc,
                format!(
                    "chart lives in dimension {}, lattice rank is {}",
                    f.chart.ambient_dim(),
                    f.rank
                ),
            );
            continue;
        }
        match f.chart.dim() {
            None => report.push("AXIOM(2)", loc, "chart is empty"),
            Some(d) if d != f.rank => report.push(
                "AXIOM(2)",
                loc,
                format!("chart has dimension {d}, lattice rank is {}", f.rank),
            ),
            Some(_) => {}
        }
    }

    for &(sub, sup) in &c.conflicts {
        report.push(
            "AXIOM(4)",
            c.inclusion_name(sub, sup),
            "embeddings along different chains of faces disagree",
        );
    }

    for inc in &c.inclusions {
        let sup_rank = c.faces[inc.sup].rank;
        let columns: Option<Vec<IntVector>> = (0..inc.embed.linear.cols())
            .map(|j| {
                inc.embed
                    .linear
                    .column(j)
                    .iter()
                    .map(|x| x.to_i64())
                    .collect::<Option<Vec<i64>>>()
                    .map(IntVector)
            })
            .collect();
        let loc = c.inclusion_name(inc.sub, inc.sup);
        let Some(columns) = columns else {
            report.push("AXIOM(5)", loc, "linear part has entries beyond 64 bits");
            continue;
        };
        match is_saturated(&columns, sup_rank) {
            Ok(true) => {}
            Ok(false) => report.push(
                "AXIOM(5)",
                loc,
                format!("linear part {} maps onto a non-saturated sublattice", inc.embed.linear),
            ),
            Err(LinalgError::DependentGenerators) => report.push("AXIOM(5)", loc, "linear part is not injective"),
            Err(e) => report.push("AXIOM(5)", loc, e.to_string()),
        }
    }

    for (w, face) in c.faces.iter().enumerate() {
        if !chart_ok(face) {
            continue;
        }
        let chart = &face.chart;
        let chart_faces = chart.faces();
        let top = chart_faces.last().cloned();
        let mut image_of: BTreeMap<FaceId, PolyFace> = BTreeMap::new();
        for u in c.subfaces(w) {
            let sub = &c.faces[u];
            if !chart_ok(sub) {
                continue;
            }
            let inc = c.inclusion(u, w).expect("subfaces come from inclusions");
            let loc = c.inclusion_name(u, w);
            let g = sub.chart.generators();
            let points: Vec<RatVector> = g.vertices.iter().map(|v| inc.embed.apply(v)).collect();
            let mut dirs: Vec<RatVector> = g.rays.iter().map(|r| inc.embed.apply_linear(r)).collect();
            for l in &g.lines {
                let l = inc.embed.apply_linear(l);
                dirs.push(-&l);
                dirs.push(l);
            }
            if !points.iter().all(|p| chart.contains(p)) || !dirs.iter().all(|d| chart.recedes_along(d)) {
                report.push("AXIOM(3)", loc, "image of the subface leaves the chart");
                continue;
            }
            let tight = chart.tight_inequalities(&points, &dirs);
            let Some(face_hit) = chart.face_of_tight_set(&tight) else {
                report.push("AXIOM(3)", loc, "image of the subface is not a face of the chart");
                continue;
            };
            if Some(&face_hit) == top.as_ref() {
                report.push("AXIOM(3)", loc, "image of the subface is the whole chart");
                continue;
            }
            if face_hit.dim != sub.rank || !image_covers(&sub.chart, &inc.embed, chart, &face_hit) {
                report.push("AXIOM(3)", loc, "image of the subface is not a face of the chart");
                continue;
            }
            image_of.insert(u, face_hit);
        }

        let mut preimages: BTreeMap<&PolyFace, Vec<FaceId>> = BTreeMap::new();
        for (u, f) in &image_of {
            preimages.entry(f).or_default().push(*u);
        }
        for f in &chart_faces {
            if Some(f) == top.as_ref() {
                continue;
            }
            let g = chart.generators();
            let describe = || {
                let vs: Vec<String> = f.vertices.iter().map(|&v| g.vertices[v].to_string()).collect();
                let rs: Vec<String> = f.rays.iter().map(|&r| g.rays[r].to_string()).collect();
                format!("vertices [{}] rays [{}]", vs.join(" "), rs.join(" "))
            };
            match preimages.get(f).map(Vec::len).unwrap_or(0) {
                1 => {}
                0 => report.push(
                    "AXIOM(3)",
                    format!("face {}", face.id),
                    format!("chart face with {} is not the image of a subface", describe()),
                ),
                _ => {
                    let names: Vec<&str> = preimages[f].iter().map(|&u| c.faces[u].id.as_str()).collect();
                    report.push(
                        "AXIOM(3)",
                        format!("face {}", face.id),
                        format!(
                            "chart face with {} is the image of several subfaces: {}",
                            describe(),
                            names.join(", ")
                        ),
                    );
                }
            }
        }

        // The face order inside a chart must be recorded as inclusions.
        for (u, fu) in &image_of {
            for (v, fv) in &image_of {
                if u != v
                    && fu.vertices.is_subset(&fv.vertices)
                    && fu.rays.is_subset(&fv.rays)
                    && fu.dim < fv.dim
                    && c.inclusion(*u, *v).is_none()
                {
                    report.push(
                        "AXIOM(4)",
                        format!("face {}", face.id),
                        format!(
                            "{} lies in {} inside the chart but no inclusion is recorded",
                            c.faces[*u].id, c.faces[*v].id
                        ),
                    );
                }
            }
        }
    }

    if !c.is_connected() {
        report.push("CONNECTED", "complex", "complex is not connected");
    }
    report
}

/// Direction space of a chart, as a subspace of `N_W ⊗ Q`.
pub(crate) fn chart_lin(face: &Face) -> Subspace {
    face.chart.lin_space()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, IntMatrix};
    use crate::polyhedral::Halfspace;

    fn vertex(id: &str) -> Face {
        Face::new(id, Polyhedron::point())
    }

    fn point_into(value: i64) -> AffineMap {
        AffineMap::new(IntMatrix::zeros(1, 0), RatVector::from_ints(&[value]))
    }

    pub(crate) fn unit_segment() -> PolyhedralComplex {
        PolyhedralComplex::new(
            vec![
                Face::new("e", Polyhedron::interval(rat(0), rat(1))),
                vertex("v0"),
                vertex("v1"),
            ],
            vec![
                FaceInclusion {
                    sub: 1,
                    sup: 0,
                    embed: point_into(0),
                },
                FaceInclusion {
                    sub: 2,
                    sup: 0,
                    embed: point_into(1),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_point_is_valid() {
        let c = PolyhedralComplex::new(vec![vertex("p")], vec![]).unwrap();
        assert!(validate_complex(&c).is_valid());
    }

    #[test]
    fn segment_is_valid() {
        let c = unit_segment();
        let report = validate_complex(&c);
        assert!(report.is_valid(), "{report}");
        assert_eq!(c.cofacets(1), vec![0]);
        assert_eq!(c.maximal_faces(), vec![0]);
    }

    #[test]
    fn doubled_vertex_inclusion_is_not_saturated() {
        // Segment [0,2] in Z, vertex inclusion with linear part x2 requires a
        // rank-1 subface; use an edge glued into a longer edge instead.
        let faces = vec![
            Face::new("big", Polyhedron::interval(rat(0), rat(2))),
            Face::new("small", Polyhedron::interval(rat(0), rat(1))),
        ];
        let scale_two = AffineMap::new(IntMatrix::from_rows(1, &[vec![2]]), RatVector::from_ints(&[0]));
        let c = PolyhedralComplex::new(
            faces,
            vec![FaceInclusion {
                sub: 1,
                sup: 0,
                embed: scale_two,
            }],
        )
        .unwrap();
        let report = validate_complex(&c);
        assert!(report.has_rule("AXIOM(5)"), "{report}");
    }

    #[test]
    fn missing_vertex_breaks_cover() {
        let c = PolyhedralComplex::new(
            vec![Face::new("e", Polyhedron::interval(rat(0), rat(1))), vertex("v0")],
            vec![FaceInclusion {
                sub: 1,
                sup: 0,
                embed: point_into(0),
            }],
        )
        .unwrap();
        let report = validate_complex(&c);
        assert!(report.has_rule("AXIOM(3)"), "{report}");
        assert!(!report.has_rule("AXIOM(5)"));
    }

    #[test]
    fn both_ends_glued_to_one_vertex() {
        let c = PolyhedralComplex::new(
            vec![Face::new("e", Polyhedron::interval(rat(0), rat(1))), vertex("v")],
            vec![FaceInclusion {
                sub: 1,
                sup: 0,
                embed: point_into(0),
            }],
        )
        .unwrap();
        // Only one embedding per pair can be recorded; the far end is uncovered.
        assert!(!validate_complex(&c).is_valid());
    }

    #[test]
    fn degenerate_chart_rejected() {
        let flat = Polyhedron::new(
            1,
            vec![Halfspace::new(vec![1], rat(0)), Halfspace::new(vec![-1], rat(0))],
            vec![],
        );
        let c = PolyhedralComplex::new(vec![Face::new("f", flat)], vec![]).unwrap();
        assert!(validate_complex(&c).has_rule("AXIOM(2)"));
    }

    #[test]
    fn disconnected_points() {
        let c = PolyhedralComplex::new(vec![vertex("a"), vertex("b")], vec![]).unwrap();
        assert!(validate_complex(&c).has_rule("CONNECTED"));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            PolyhedralComplex::new(vec![vertex("a"), vertex("a")], vec![]),
            Err(PolyhedralError::DuplicateFace(_))
        ));
        let bad_shape = FaceInclusion {
            sub: 1,
            sup: 0,
            embed: AffineMap::identity(2),
        };
        assert!(matches!(
            PolyhedralComplex::new(
                vec![Face::new("e", Polyhedron::interval(rat(0), rat(1))), vertex("v")],
                vec![bad_shape]
            ),
            Err(PolyhedralError::MalformedInclusion { .. })
        ));
    }

    #[test]
    fn transitive_closure_composes() {
        // Quadrant with its two rays and the apex; only covering relations given.
        let quadrant = Polyhedron::orthant(2);
        let ray = Polyhedron::orthant(1);
        let faces = vec![
            Face::new("Q", quadrant),
            Face::new("X", ray.clone()),
            Face::new("Y", ray),
            vertex("O"),
        ];
        let x_axis = AffineMap::new(IntMatrix::from_rows(1, &[vec![1], vec![0]]), RatVector::zeros(2));
        let y_axis = AffineMap::new(IntMatrix::from_rows(1, &[vec![0], vec![1]]), RatVector::zeros(2));
        let apex = AffineMap::new(IntMatrix::zeros(1, 0), RatVector::zeros(1));
        let c = PolyhedralComplex::new(
            faces,
            vec![
                FaceInclusion {
                    sub: 1,
                    sup: 0,
                    embed: x_axis,
                },
                FaceInclusion {
                    sub: 2,
                    sup: 0,
                    embed: y_axis,
                },
                FaceInclusion {
                    sub: 3,
                    sup: 1,
                    embed: apex.clone(),
                },
                FaceInclusion {
                    sub: 3,
                    sup: 2,
                    embed: apex,
                },
            ],
        )
        .unwrap();
        assert!(c.inclusion(3, 0).is_some());
        let report = validate_complex(&c);
        assert!(report.is_valid(), "{report}");
    }
}
