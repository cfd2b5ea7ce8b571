use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::{combine, times_vector, FamilyDatum, FamilyError};
use crate::linalg::{format_rat, RatVector};
use crate::polyhedral::{validate_complex, AffineMap, FaceId};
use crate::report::ValidationReport;
use crate::tropcurve::{check_balanced, genus, ParameterizedTropicalCurve, WeightedGraph};

fn show(v: &RatVector) -> String {
    let parts: Vec<String> = v.0.iter().map(format_rat).collect();
    format!("({})", parts.join(", "))
}

fn is_zero_map(m: &AffineMap) -> bool {
    m.linear.is_zero() && m.translation.is_zero()
}

/// Checks the base complex and the family conditions: every fiber over a
/// face interior is a parameterized tropical curve of the face's type
/// (`FAMILY(1)`), lengths and positions agree through each contraction
/// (`FAMILY(2)`, `FAMILY(3)`), and each contraction is a weighted
/// contraction of the right edges (`CONTRACTION`).
pub fn validate_family(f: &FamilyDatum) -> ValidationReport {
    let mut report = validate_complex(&f.base);
    for w in 0..f.base.len() {
        check_face(f, w, &mut report);
    }
    for w in 0..f.base.len() {
        for sup in f.base.cofacets(w) {
            if f.contraction(w, sup).is_none() {
                report.push(
                    "CONTRACTION",
                    format!("inclusion {}->{}", f.base.face(w).id, f.base.face(sup).id),
                    "no contraction given",
                );
            }
        }
    }
    for c in &f.contractions {
        check_contraction(f, c, &mut report);
    }
    report
}

fn check_face(f: &FamilyDatum, w: FaceId, report: &mut ValidationReport) {
    let face = f.base.face(w);
    let ff = &f.faces[w];
    let ty = &ff.ty;
    let loc = format!("face {}", face.id);
    if ty.leg_slopes != f.extended_degree {
        report.push("FAMILY(1)", &loc, "leg slopes differ from the extended degree");
    }
    if !ty.graph.is_connected() {
        report.push("FAMILY(1)", &loc, "graph is empty or disconnected");
    }
    for v in check_balanced(ty).violations {
        report.push("FAMILY(1)", &loc, v.to_string());
    }
    let gens = face.chart.generators();
    let interior = face.chart.relative_interior_point();
    for (e, l) in ff.lengths.iter().enumerate() {
        let eloc = format!("{loc}, edge {}", ty.graph.edges[e].id);
        // An affine function is nonnegative on a polyhedron iff it is at its
        // vertices and along its rays and lines; it is then positive on the
        // relative interior iff it is positive at one interior point.
        if let Some(p) = gens.vertices.iter().find(|p| l.apply(p).0[0].is_negative()) {
            report.push(
                "FAMILY(1)",
                &eloc,
                format!("negative length {} at {}", format_rat(&l.apply(p).0[0]), show(p)),
            );
        } else if let Some(r) = gens.rays.iter().find(|r| l.apply_linear(r).0[0].is_negative()) {
            report.push(
                "FAMILY(1)",
                &eloc,
                format!("length decreases without bound along {}", show(r)),
            );
        } else if let Some(d) = gens.lines.iter().find(|d| !l.apply_linear(d).0[0].is_zero()) {
            report.push(
                "FAMILY(1)",
                &eloc,
                format!("length is unbounded below along {}", show(d)),
            );
        } else if let Some(p) = &interior {
            if !l.apply(p).0[0].is_positive() {
                report.push(
                    "FAMILY(1)",
                    &eloc,
                    format!("length vanishes at interior point {}", show(p)),
                );
            }
        }
        let edge = &ty.graph.edges[e];
        let defect = combine(&[
            (1, &ff.positions[edge.v]),
            (-1, &ff.positions[edge.u]),
            (-1, &times_vector(l, &ty.edge_slopes[e])),
        ]);
        if !is_zero_map(&defect) {
            let at = interior.clone().unwrap_or_else(|| RatVector::zeros(face.rank));
            report.push(
                "FAMILY(1)",
                &eloc,
                format!(
                    "edge relation fails, defect {} at {}",
                    show(&defect.apply(&at)),
                    show(&at)
                ),
            );
        }
    }
}

fn check_contraction(f: &FamilyDatum, c: &super::Contraction, report: &mut ValidationReport) {
    let (sub, sup) = (f.base.face(c.sub), f.base.face(c.sup));
    let loc = format!("inclusion {}->{}", sub.id, sup.id);
    let Some(inc) = f.base.inclusion(c.sub, c.sup) else {
        report.push("CONTRACTION", &loc, "faces are not included in each other");
        return;
    };
    let (fs, ft) = (&f.faces[c.sup], &f.faces[c.sub]);
    let (gs, gt) = (&fs.ty.graph, &ft.ty.graph);

    let mut hit = vec![0usize; gt.edges.len()];
    for (e, target) in c.edge_map.iter().enumerate() {
        let edge = &gs.edges[e];
        let (a, b) = (c.vertex_map[edge.u], c.vertex_map[edge.v]);
        let eid = &edge.id;
        let restricted = fs.lengths[e].compose(&inc.embed);
        match *target {
            None => {
                if a != b {
                    report.push(
                        "CONTRACTION",
                        &loc,
                        format!("contracted edge {eid} joins distinct vertices"),
                    );
                }
                if !is_zero_map(&restricted) {
                    report.push(
                        "CONTRACTION",
                        &loc,
                        format!("contracted edge {eid} has length not identically zero on {}", sub.id),
                    );
                }
            }
            Some(t) => {
                hit[t] += 1;
                let te = &gt.edges[t];
                let slope = &fs.ty.edge_slopes[e];
                let forward = (te.u, te.v) == (a, b) && *slope == ft.ty.edge_slopes[t];
                let backward = (te.v, te.u) == (a, b) && *slope == -&ft.ty.edge_slopes[t];
                if !forward && !backward {
                    report.push(
                        "CONTRACTION",
                        &loc,
                        format!("edge {eid} does not map onto {} with its slope", te.id),
                    );
                }
                if restricted != ft.lengths[t] {
                    report.push(
                        "FAMILY(2)",
                        &loc,
                        format!("length of {eid} differs from that of {}", te.id),
                    );
                }
            }
        }
    }
    for (t, &n) in hit.iter().enumerate() {
        if n != 1 {
            report.push(
                "CONTRACTION",
                &loc,
                format!("edge {} has {n} preimages, expected 1", gt.edges[t].id),
            );
        }
    }

    if gs.legs.len() != gt.legs.len() {
        report.push("CONTRACTION", &loc, "leg counts differ");
    } else {
        for (ls, lt) in gs.legs.iter().zip(&gt.legs) {
            if c.vertex_map[ls.vertex] != lt.vertex {
                report.push("CONTRACTION", &loc, format!("leg {} moves to another vertex", ls.id));
            }
        }
    }

    for x in 0..gt.vertices.len() {
        let pre: BTreeSet<usize> = (0..gs.vertices.len()).filter(|&v| c.vertex_map[v] == x).collect();
        let xid = &gt.vertices[x].id;
        if pre.is_empty() {
            report.push("CONTRACTION", &loc, format!("vertex {xid} has no preimage"));
            continue;
        }
        let inner: Vec<usize> = (0..gs.edges.len())
            .filter(|&e| c.edge_map[e].is_none() && pre.contains(&gs.edges[e].u))
            .collect();
        let vertices: Vec<(String, u32)> = pre
            .iter()
            .map(|&v| (gs.vertices[v].id.clone(), gs.vertices[v].weight))
            .collect();
        let ids: Vec<(&str, u32)> = vertices.iter().map(|(s, w)| (s.as_str(), *w)).collect();
        let edges: Vec<(String, String, String)> = inner
            .iter()
            .map(|&e| {
                let ed = &gs.edges[e];
                (
                    ed.id.clone(),
                    gs.vertices[ed.u].id.clone(),
                    gs.vertices[ed.v].id.clone(),
                )
            })
            .collect();
        let eids: Vec<(&str, &str, &str)> = edges
            .iter()
            .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
            .collect();
        match WeightedGraph::from_ids(&ids, &eids, &[]).map(|g| (g.is_connected(), genus(&g))) {
            Ok((true, Ok(gen))) if gen == u64::from(gt.vertices[x].weight) => {}
            Ok((true, Ok(gen))) => report.push(
                "CONTRACTION",
                &loc,
                format!(
                    "vertex {xid} has weight {} but its preimage has genus {gen}",
                    gt.vertices[x].weight
                ),
            ),
            _ => report.push(
                "CONTRACTION",
                &loc,
                format!("preimage of vertex {xid} is not connected"),
            ),
        }
    }

    for (v, &x) in c.vertex_map.iter().enumerate() {
        if fs.positions[v].compose(&inc.embed) != ft.positions[x] {
            report.push(
                "FAMILY(3)",
                &loc,
                format!(
                    "position of {} differs from that of {}",
                    gs.vertices[v].id, gt.vertices[x].id
                ),
            );
        }
    }
}

/// The face whose relative interior contains the point `q` given in the
/// chart of face `w`, with `q` in that face's chart.
pub fn locate(f: &FamilyDatum, w: FaceId, q: &RatVector) -> Result<(FaceId, RatVector), FamilyError> {
    let face = f
        .base
        .faces()
        .get(w)
        .ok_or_else(|| FamilyError::UnknownFace(w.to_string()))?;
    let outside = || FamilyError::PointNotInComplex(format!("{} in face {}", show(q), face.id));
    if q.dim() != face.rank || !face.chart.contains(q) {
        return Err(outside());
    }
    if face.chart.in_relative_interior(q) {
        return Ok((w, q.clone()));
    }
    for s in f.base.subfaces(w) {
        let inc = f.base.inclusion(s, w).expect("subface has an inclusion");
        if let Some(p) = inc.embed.preimage(q) {
            if f.base.face(s).chart.in_relative_interior(&p) {
                return Ok((s, p));
            }
        }
    }
    Err(outside())
}

/// The fiber `(Γ_q, h_q)` over the point `q` of face `w`'s chart.
pub fn fiber(f: &FamilyDatum, w: FaceId, q: &RatVector) -> Result<ParameterizedTropicalCurve, FamilyError> {
    let (face, p) = locate(f, w, q)?;
    let ff = &f.faces[face];
    let (lengths, positions) = ff.at(&p);
    Ok(ParameterizedTropicalCurve::new(ff.ty.clone(), lengths, positions)?)
}
