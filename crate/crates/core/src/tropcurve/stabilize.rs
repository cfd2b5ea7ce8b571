use super::{CombinatorialType, CurveError, Edge, Leg, ParameterizedTropicalCurve, Vertex, WeightedGraph};
use crate::linalg::{IntVector, Rat};

/// The stable model of a type, with bookkeeping back to the input:
/// `kept_vertices[i]` is the input index of output vertex `i`, and
/// `edge_groups[j]` lists the input edges merged into output edge `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizedType {
    pub ty: CombinatorialType,
    pub kept_vertices: Vec<usize>,
    pub edge_groups: Vec<Vec<usize>>,
}

struct WorkEdge {
    u: usize,
    v: usize,
    slope: IntVector,
    group: Vec<usize>,
}

/// Prunes weight-0 vertices with a single zero-slope edge and no legs, and
/// smooths weight-0 vertices with exactly two edge ends and no legs, until
/// every vertex is stable.
pub fn stabilize_type(t: &CombinatorialType) -> Result<StabilizedType, CurveError> {
    let g = &t.graph;
    if g.vertices.is_empty() {
        return Err(CurveError::Empty);
    }
    let mut alive = vec![true; g.vertices.len()];
    let mut edges: Vec<Option<WorkEdge>> = g
        .edges
        .iter()
        .zip(&t.edge_slopes)
        .enumerate()
        .map(|(i, (e, s))| {
            Some(WorkEdge {
                u: e.u,
                v: e.v,
                slope: s.clone(),
                group: vec![i],
            })
        })
        .collect();
    let mut legs_at = vec![0usize; g.vertices.len()];
    for l in &g.legs {
        legs_at[l.vertex] += 1;
    }

    let unstable = |v: usize, why: &str| CurveError::Unstabilizable(format!("vertex `{}` {why}", g.vertices[v].id));
    loop {
        let mut changed = false;
        for v in 0..g.vertices.len() {
            if !alive[v] {
                continue;
            }
            let incident: Vec<usize> = edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.as_ref().is_some_and(|e| e.u == v || e.v == v))
                .map(|(i, _)| i)
                .collect();
            let ends: usize = incident
                .iter()
                .map(|&i| {
                    let e = edges[i].as_ref().expect("live");
                    usize::from(e.u == v) + usize::from(e.v == v)
                })
                .sum();
            let weight = g.vertices[v].weight as usize;
            if ends + legs_at[v] + 2 * weight >= 3 {
                continue;
            }
            if weight > 0 {
                return Err(unstable(v, "has positive weight but nothing attached"));
            }
            if legs_at[v] > 0 {
                return Err(unstable(v, "carries a leg and cannot be smoothed"));
            }
            match (ends, incident.as_slice()) {
                (1, &[e]) => {
                    if !edges[e].as_ref().expect("live").slope.is_zero() {
                        return Err(unstable(v, "ends a nonzero-slope edge"));
                    }
                    edges[e] = None;
                    alive[v] = false;
                }
                (2, &[e1, e2]) => {
                    let a = edges[e1].take().expect("live");
                    let b = edges[e2].take().expect("live");
                    // Orient both away from v.
                    let (x, out_a) = if a.u == v {
                        (a.v, a.slope.clone())
                    } else {
                        (a.u, -&a.slope)
                    };
                    let (y, _) = if b.u == v {
                        (b.v, b.slope.clone())
                    } else {
                        (b.u, -&b.slope)
                    };
                    let mut group = a.group;
                    group.extend(b.group);
                    edges[e1] = Some(WorkEdge {
                        u: x,
                        v: y,
                        slope: -&out_a,
                        group,
                    });
                    alive[v] = false;
                }
                (2, &[_]) => return Err(unstable(v, "carries only a loop")),
                _ => return Err(unstable(v, "is isolated")),
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let kept_vertices: Vec<usize> = (0..g.vertices.len()).filter(|&v| alive[v]).collect();
    let mut new_index = vec![usize::MAX; g.vertices.len()];
    for (i, &v) in kept_vertices.iter().enumerate() {
        new_index[v] = i;
    }
    let vertices: Vec<Vertex> = kept_vertices.iter().map(|&v| g.vertices[v].clone()).collect();
    let mut new_edges = Vec::new();
    let mut slopes = Vec::new();
    let mut edge_groups = Vec::new();
    for e in edges.into_iter().flatten() {
        new_edges.push(Edge {
            id: g.edges[e.group[0]].id.clone(),
            u: new_index[e.u],
            v: new_index[e.v],
        });
        slopes.push(e.slope);
        edge_groups.push(e.group);
    }
    let legs: Vec<Leg> = g
        .legs
        .iter()
        .map(|l| Leg {
            id: l.id.clone(),
            vertex: new_index[l.vertex],
        })
        .collect();
    let graph = WeightedGraph::new(vertices, new_edges, legs)?;
    let ty = CombinatorialType::new(graph, slopes, t.leg_slopes.clone(), t.dim)?;
    Ok(StabilizedType {
        ty,
        kept_vertices,
        edge_groups,
    })
}

/// Stabilizes the fiber: merged edges add their lengths, surviving vertices
/// keep their positions.
pub fn stabilize(p: &ParameterizedTropicalCurve) -> Result<ParameterizedTropicalCurve, CurveError> {
    let s = stabilize_type(&p.ty)?;
    let lengths = s
        .edge_groups
        .iter()
        .map(|grp| grp.iter().map(|&e| p.lengths[e].clone()).sum::<Rat>())
        .collect();
    let positions = s.kept_vertices.iter().map(|&v| p.positions[v].clone()).collect();
    ParameterizedTropicalCurve::new(s.ty, lengths, positions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, RatVector};
    use crate::tropcurve::ty::tests::{iv, tripod, two_vertex};
    use crate::tropcurve::{genus, is_stable, realize};

    #[test]
    fn stable_input_unchanged() {
        let p = realize(&two_vertex(), &[rat(2)], &RatVector::zeros(2)).unwrap();
        assert_eq!(stabilize(&p).unwrap(), p);
        let q = realize(&tripod(), &[], &RatVector::zeros(2)).unwrap();
        assert_eq!(stabilize(&q).unwrap(), q);
    }

    #[test]
    fn smooths_bivalent_vertex() {
        let g = WeightedGraph::from_ids(
            &[("u", 0), ("v", 0), ("w", 0)],
            &[("e", "u", "v"), ("f", "v", "w")],
            &[("a", "u"), ("b", "u"), ("c", "w"), ("d", "w")],
        )
        .unwrap();
        let t = CombinatorialType::new(
            g,
            vec![iv(&[1, 0]), iv(&[1, 0])],
            vec![iv(&[0, 1]), iv(&[-1, -1]), iv(&[1, 1]), iv(&[0, -1])],
            2,
        )
        .unwrap();
        let p = realize(&t, &[rat(1), rat(2)], &RatVector::zeros(2)).unwrap();
        let s = stabilize(&p).unwrap();
        assert_eq!(s.ty.graph.vertices.len(), 2);
        assert_eq!(s.lengths, vec![rat(3)]);
        assert_eq!(s.ty.edge_slopes, vec![iv(&[1, 0])]);
        assert_eq!(s.ty.graph.edges[0].id, "e");
        assert!(s.validate().is_valid());
        assert!(is_stable(&s.ty.graph));
        assert_eq!(genus(&s.ty.graph), genus(&t.graph));
    }

    #[test]
    fn prunes_zero_slope_tail() {
        let g = WeightedGraph::from_ids(
            &[("v", 0), ("t", 0)],
            &[("tail", "v", "t")],
            &[("a", "v"), ("b", "v"), ("c", "v")],
        )
        .unwrap();
        let t = CombinatorialType::new(g, vec![iv(&[0, 0])], vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1])], 2).unwrap();
        let p = realize(&t, &[rat(5)], &RatVector::zeros(2)).unwrap();
        let s = stabilize(&p).unwrap();
        assert_eq!(s.ty, tripod());
        assert!(is_stable(&s.ty.graph));
    }

    #[test]
    fn refuses_leg_carrying_bivalent_vertex() {
        let g = WeightedGraph::from_ids(
            &[("v", 0), ("w", 0)],
            &[("e", "v", "w")],
            &[("a", "v"), ("b", "v"), ("c", "v"), ("p", "w")],
        )
        .unwrap();
        let t = CombinatorialType::new(
            g,
            vec![iv(&[0, 0])],
            vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1]), iv(&[0, 0])],
            2,
        )
        .unwrap();
        assert!(matches!(stabilize_type(&t), Err(CurveError::Unstabilizable(_))));
    }

    #[test]
    fn lone_loop_is_unstabilizable() {
        let g = WeightedGraph::from_ids(&[("v", 0)], &[("l", "v", "v")], &[]).unwrap();
        let t = CombinatorialType::new(g, vec![iv(&[0, 0])], vec![], 2).unwrap();
        assert!(matches!(stabilize_type(&t), Err(CurveError::Unstabilizable(_))));
    }
}
