use std::collections::HashSet;

use itertools::Itertools;
use serde::Serialize;

use super::iso::canonical_form;
use super::ModuliError;
use crate::linalg::IntVector;
use crate::tropcurve::{CombinatorialType, Edge, Leg, Vertex, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WallKind {
    Weightless3Valent,
    WeightlessAlmost3Valent,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WallClass {
    pub kind: WallKind,
    pub four_valent_vertex: Option<usize>,
}

pub fn classify(t: &CombinatorialType) -> WallClass {
    let g = &t.graph;
    let other = WallClass {
        kind: WallKind::Other,
        four_valent_vertex: None,
    };
    if g.vertices.iter().any(|v| v.weight != 0) {
        return other;
    }
    let mut four = None;
    for v in 0..g.vertices.len() {
        match g.valence(v) {
            3 => {}
            4 if four.is_none() => four = Some(v),
            _ => return other,
        }
    }
    WallClass {
        kind: if four.is_some() {
            WallKind::WeightlessAlmost3Valent
        } else {
            WallKind::Weightless3Valent
        },
        four_valent_vertex: four,
    }
}

/// Contracts the given edges whatever their slopes: non-loops merge their
/// endpoints (weights add), loops disappear and raise their vertex weight
/// by one. The merged vertex keeps the id of its first member.
pub fn contract_any(t: &CombinatorialType, edges: &[usize]) -> Result<CombinatorialType, ModuliError> {
    let g = &t.graph;
    let n = g.vertices.len();
    for &e in edges {
        if e >= g.edges.len() {
            return Err(ModuliError::UnknownEdge(format!("#{e}")));
        }
    }
    let contracted: HashSet<usize> = edges.iter().copied().collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut extra = vec![0u32; n];
    for &e in contracted.iter().sorted() {
        let (a, b) = (find(&mut parent, g.edges[e].u), find(&mut parent, g.edges[e].v));
        if a == b {
            extra[a] += 1;
        } else {
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
            extra[lo] += extra[hi];
        }
    }
    let roots: Vec<usize> = (0..n).filter(|&v| find(&mut parent, v) == v).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &r) in roots.iter().enumerate() {
        index[r] = i;
    }
    let mut weights: Vec<u32> = roots.iter().map(|&r| extra[r]).collect();
    for v in 0..n {
        let r = find(&mut parent, v);
        weights[index[r]] += g.vertices[v].weight;
    }
    let vertices = roots
        .iter()
        .zip(weights)
        .map(|(&r, weight)| Vertex {
            id: g.vertices[r].id.clone(),
            weight,
        })
        .collect();
    let mut new_edges = Vec::new();
    let mut slopes = Vec::new();
    for (e, edge) in g.edges.iter().enumerate() {
        if contracted.contains(&e) {
            continue;
        }
        new_edges.push(Edge {
            id: edge.id.clone(),
            u: index[find(&mut parent, edge.u)],
            v: index[find(&mut parent, edge.v)],
        });
        slopes.push(t.edge_slopes[e].clone());
    }
    let legs = g
        .legs
        .iter()
        .map(|l| Leg {
            id: l.id.clone(),
            vertex: index[find(&mut parent, l.vertex)],
        })
        .collect();
    let graph = WeightedGraph::new(vertices, new_edges, legs)?;
    Ok(CombinatorialType::new(graph, slopes, t.leg_slopes.clone(), t.dim)?)
}

/// Contraction of zero-slope edges only.
pub fn contract(t: &CombinatorialType, edges: &[usize]) -> Result<CombinatorialType, ModuliError> {
    for &e in edges {
        let slope = t
            .edge_slopes
            .get(e)
            .ok_or_else(|| ModuliError::UnknownEdge(format!("#{e}")))?;
        if !slope.is_zero() {
            return Err(ModuliError::NonzeroSlopeContraction(t.graph.edges[e].id.clone()));
        }
    }
    contract_any(t, edges)
}

/// Whether contracting some set of edges of `sup` (of any slope) gives a
/// type isomorphic to `sub`.
pub fn is_adjacent(sub: &CombinatorialType, sup: &CombinatorialType) -> bool {
    if sub.dim != sup.dim || sub.leg_slopes != sup.leg_slopes {
        return false;
    }
    let (es, eb) = (sub.graph.edges.len(), sup.graph.edges.len());
    if es > eb {
        return false;
    }
    let key = canonical_form(sub);
    (0..eb).combinations(eb - es).any(|set| {
        contract_any(sup, &set)
            .map(|c| c.graph.vertices.len() == sub.graph.vertices.len() && canonical_form(&c) == key)
            .unwrap_or(false)
    })
}

/// A resolution of a 4-valent vertex, with the index of the new edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub ty: CombinatorialType,
    pub new_edge: usize,
}

#[derive(Clone, Copy)]
enum End {
    Leg(usize),
    EdgeEnd { edge: usize, at_u: bool },
}

fn fresh_id(base: String, taken: &HashSet<String>) -> String {
    let mut id = base;
    while taken.contains(&id) {
        id.push('\'');
    }
    id
}

/// Splits the 4-valent vertex `v` in each of the three ways of pairing its
/// star, joining the halves by a new edge whose slope balances both.
/// Results are deduplicated up to isomorphism, in pairing order.
pub fn resolve_4valent(t: &CombinatorialType, v: usize) -> Result<Vec<Resolution>, ModuliError> {
    let g = &t.graph;
    let vid = g
        .vertices
        .get(v)
        .map(|x| x.id.clone())
        .ok_or_else(|| ModuliError::UnknownVertex(format!("#{v}")))?;
    let class = classify(t);
    if class.kind != WallKind::WeightlessAlmost3Valent || class.four_valent_vertex != Some(v) {
        return Err(ModuliError::NotAlmost3Valent(vid));
    }
    let mut ends = Vec::new();
    for (e, edge) in g.edges.iter().enumerate() {
        if edge.u == v {
            ends.push(End::EdgeEnd { edge: e, at_u: true });
        }
        if edge.v == v {
            ends.push(End::EdgeEnd { edge: e, at_u: false });
        }
    }
    ends.extend(g.legs_at(v).map(End::Leg));
    debug_assert_eq!(ends.len(), 4);
    let out_slope = |end: End| -> IntVector {
        match end {
            End::Leg(l) => t.leg_slopes[l].clone(),
            End::EdgeEnd { edge, at_u: true } => t.edge_slopes[edge].clone(),
            End::EdgeEnd { edge, at_u: false } => -&t.edge_slopes[edge],
        }
    };

    let taken: HashSet<String> = g
        .vertices
        .iter()
        .map(|x| x.id.clone())
        .chain(g.edges.iter().map(|e| e.id.clone()))
        .chain(g.legs.iter().map(|l| l.id.clone()))
        .collect();
    let v2_id = fresh_id(format!("{vid}'"), &taken);
    let mut taken2 = taken.clone();
    taken2.insert(v2_id.clone());
    let edge_id = fresh_id(format!("{vid}|{v2_id}"), &taken2);

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (a, b, c, d) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        let mut graph = g.clone();
        let v2 = graph.vertices.len();
        graph.vertices.push(Vertex {
            id: v2_id.clone(),
            weight: 0,
        });
        for end in [ends[c], ends[d]] {
            match end {
                End::Leg(l) => graph.legs[l].vertex = v2,
                End::EdgeEnd { edge, at_u: true } => graph.edges[edge].u = v2,
                End::EdgeEnd { edge, at_u: false } => graph.edges[edge].v = v2,
            }
        }
        let new_edge = graph.edges.len();
        graph.edges.push(Edge {
            id: edge_id.clone(),
            u: v,
            v: v2,
        });
        let mut slopes = t.edge_slopes.clone();
        slopes.push(-&(&out_slope(ends[a]) + &out_slope(ends[b])));
        let graph = WeightedGraph::new(graph.vertices, graph.edges, graph.legs)?;
        let ty = CombinatorialType::new(graph, slopes, t.leg_slopes.clone(), t.dim)?;
        if seen.insert(canonical_form(&ty)) {
            out.push(Resolution { ty, new_edge });
        }
    }
    Ok(out)
}
