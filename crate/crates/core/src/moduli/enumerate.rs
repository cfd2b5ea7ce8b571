use std::collections::{BTreeMap, VecDeque};

use itertools::Itertools;
use rayon::prelude::*;

use super::iso::{canonical_form, canonical_type};
use super::stratum::stratum;
use super::ModuliError;
use crate::linalg::IntVector;
use crate::tropcurve::{is_stable, CombinatorialType, Edge, Leg, Vertex, WeightedGraph};

/// Genus `g`, `contracted` legs of slope zero placed first, then the legs
/// of the degree `∇`, and a cap on the number of bounded edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub genus: u32,
    pub contracted: usize,
    pub degree: Vec<IntVector>,
    pub max_edges: usize,
}

impl EnumerationSpec {
    pub fn dim(&self) -> usize {
        self.degree.first().map_or(0, IntVector::dim)
    }

    /// `∇̄`: the contracted zero slopes followed by `∇`.
    pub fn extended_degree(&self) -> Vec<IntVector> {
        let mut out = vec![IntVector::zeros(self.dim()); self.contracted];
        out.extend(self.degree.iter().cloned());
        out
    }
}

/// Per-coordinate bound `B_k = Σ_legs max(slope_k, 0)` on edge slopes of
/// realizable types: every bounded edge with positive `k`-slope crosses a
/// generic level set of the `k`-th coordinate, and the total flux through
/// such a level is at most the flux carried off by the legs.
pub fn slope_bound(extended: &[IntVector]) -> Vec<i64> {
    let dim = extended.first().map_or(0, IntVector::dim);
    (0..dim).map(|k| extended.iter().map(|s| s.0[k].max(0)).sum()).collect()
}

fn bare(g: WeightedGraph, legs: usize) -> CombinatorialType {
    let slopes = vec![IntVector::zeros(0); g.edges.len()];
    CombinatorialType::new(g, slopes, vec![IntVector::zeros(0); legs], 0).expect("shapes match")
}

/// Every way of splitting a vertex in two along a new edge, or trading a
/// unit of weight for a loop, keeping both halves stable.
fn expansions(t: &CombinatorialType) -> Vec<CombinatorialType> {
    let g = &t.graph;
    let legs = g.legs.len();
    let mut out = Vec::new();
    for v in 0..g.vertices.len() {
        let w = g.vertices[v].weight;
        if w > 0 {
            let mut h = g.clone();
            h.vertices[v].weight -= 1;
            h.edges.push(Edge {
                id: format!("e{}", h.edges.len()),
                u: v,
                v,
            });
            out.push(bare(h, legs));
        }
        // Star of v: (edge, is u-end) pairs then legs.
        let mut ends: Vec<(Option<usize>, bool, usize)> = Vec::new();
        for (e, edge) in g.edges.iter().enumerate() {
            if edge.u == v {
                ends.push((Some(e), true, 0));
            }
            if edge.v == v {
                ends.push((Some(e), false, 0));
            }
        }
        ends.extend(g.legs_at(v).map(|l| (None, false, l)));
        let k = ends.len();
        for mask in 0u64..(1 << k) {
            let moved = mask.count_ones() as usize;
            for w2 in 0..=w {
                let w1 = w - w2;
                if (k - moved) + 1 + 2 * w1 as usize <= 2 || moved + 1 + 2 * w2 as usize <= 2 {
                    continue;
                }
                let mut h = g.clone();
                let v2 = h.vertices.len();
                h.vertices[v].weight = w1;
                h.vertices.push(Vertex {
                    id: format!("v{v2}"),
                    weight: w2,
                });
                for (i, &(edge, at_u, leg)) in ends.iter().enumerate() {
                    if mask >> i & 1 == 0 {
                        continue;
                    }
                    match edge {
                        Some(e) if at_u => h.edges[e].u = v2,
                        Some(e) => h.edges[e].v = v2,
                        None => h.legs[leg].vertex = v2,
                    }
                }
                h.edges.push(Edge {
                    id: format!("e{}", h.edges.len()),
                    u: v,
                    v: v2,
                });
                out.push(bare(h, legs));
            }
        }
    }
    out
}

/// Stable weighted graphs of genus `genus` with `legs` ordered legs and at
/// most `max_edges` edges, up to isomorphism, as slope-free types. Every
/// stable graph contracts to the one-vertex graph through stable graphs, so
/// reversing contractions reaches all of them.
pub fn enumerate_stable_graphs(genus: u32, legs: usize, max_edges: usize) -> Vec<CombinatorialType> {
    if legs + 2 * genus as usize <= 2 {
        return Vec::new();
    }
    let root = WeightedGraph::new(
        vec![Vertex {
            id: "v0".into(),
            weight: genus,
        }],
        vec![],
        (0..legs)
            .map(|i| Leg {
                id: format!("l{}", i + 1),
                vertex: 0,
            })
            .collect(),
    )
    .expect("single vertex");
    let mut found: BTreeMap<String, CombinatorialType> = BTreeMap::new();
    let root = bare(root, legs);
    found.insert(canonical_form(&root), root.clone());
    let mut queue = VecDeque::from([root]);
    while let Some(t) = queue.pop_front() {
        if t.graph.edges.len() >= max_edges {
            continue;
        }
        for next in expansions(&t) {
            debug_assert!(is_stable(&next.graph));
            let key = canonical_form(&next);
            if let std::collections::btree_map::Entry::Vacant(slot) = found.entry(key) {
                slot.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    found.into_values().collect()
}

/// All balanced slope assignments on `shape` with nonempty strata and
/// slopes within `bound`.
fn assign_slopes(shape: &CombinatorialType, extended: &[IntVector], bound: &[i64]) -> Vec<CombinatorialType> {
    let g = &shape.graph;
    let dim = bound.len();
    let n = g.vertices.len();
    let mut order = vec![0];
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut tree = vec![false; g.edges.len()];
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for e in g.edges_at(x) {
            let y = if g.edges[e].u == x { g.edges[e].v } else { g.edges[e].u };
            if !seen[y] {
                seen[y] = true;
                parent_edge[y] = Some(e);
                tree[e] = true;
                order.push(y);
            }
        }
    }
    let free: Vec<usize> = (0..g.edges.len()).filter(|&e| !tree[e]).collect();
    let is_loop = |e: usize| g.edges[e].u == g.edges[e].v;
    let box_vectors: Vec<IntVector> = bound
        .iter()
        .map(|&b| -b..=b)
        .multi_cartesian_product()
        .map(IntVector)
        .collect();
    let zero = vec![IntVector::zeros(dim)];
    let choices: Vec<&Vec<IntVector>> = free
        .iter()
        .map(|&e| if is_loop(e) { &zero } else { &box_vectors })
        .collect();
    let genus_one_or_more = !free.is_empty();

    let mut out = Vec::new();
    let combos: Box<dyn Iterator<Item = Vec<&IntVector>>> = if choices.is_empty() {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new(choices.iter().map(|c| c.iter()).multi_cartesian_product())
    };
    for combo in combos {
        let mut slopes = vec![IntVector::zeros(dim); g.edges.len()];
        for (&e, s) in free.iter().zip(&combo) {
            slopes[e] = (*s).clone();
        }
        // need[x]: outgoing slope sum at x excluding the parent edge.
        let mut need: Vec<IntVector> = vec![IntVector::zeros(dim); n];
        for (l, leg) in g.legs.iter().enumerate() {
            need[leg.vertex] = &need[leg.vertex] + &extended[l];
        }
        for &e in &free {
            let edge = &g.edges[e];
            need[edge.u] = &need[edge.u] + &slopes[e];
            need[edge.v] = &need[edge.v] - &slopes[e];
        }
        let mut ok = true;
        for &x in order.iter().skip(1).rev() {
            let e = parent_edge[x].expect("non-root");
            let edge = &g.edges[e];
            let p = if edge.u == x { edge.v } else { edge.u };
            // Slope leaving x along the parent edge is -need[x].
            let out_x = -&need[x];
            if out_x.0.iter().zip(bound).any(|(s, b)| s.abs() > *b) {
                ok = false;
                break;
            }
            slopes[e] = if edge.u == x { out_x.clone() } else { -&out_x };
            need[p] = &need[p] - &out_x;
        }
        if !ok || !need[0].is_zero() {
            continue;
        }
        let t = CombinatorialType::new(g.clone(), slopes, extended.to_vec(), dim).expect("shapes match");
        if genus_one_or_more {
            match stratum(&t) {
                Ok(s) if !s.is_empty() => {}
                _ => continue,
            }
        }
        out.push(t);
    }
    out
}

/// All stable balanced types with the given genus and extended degree, at
/// most `max_edges` edges and nonempty strata, one per isomorphism class,
/// canonically labeled and sorted by canonical form.
pub fn enumerate_types(spec: &EnumerationSpec) -> Result<Vec<CombinatorialType>, ModuliError> {
    let dim = spec.dim();
    if let Some(bad) = spec.degree.iter().find(|s| s.dim() != dim) {
        return Err(ModuliError::InvalidDegree(format!(
            "slope {bad} has dimension {}, expected {dim}",
            bad.dim()
        )));
    }
    let extended = spec.extended_degree();
    let total = extended.iter().fold(IntVector::zeros(dim), |acc, s| &acc + s);
    if !total.is_zero() {
        return Ok(Vec::new());
    }
    let bound = slope_bound(&extended);
    let shapes = enumerate_stable_graphs(spec.genus, extended.len(), spec.max_edges);
    let found: Vec<(String, CombinatorialType)> = shapes
        .par_iter()
        .flat_map_iter(|shape| {
            assign_slopes(shape, &extended, &bound).into_iter().map(|t| {
                let c = canonical_type(&t);
                (canonical_form(&c), c)
            })
        })
        .collect();
    let unique: BTreeMap<String, CombinatorialType> = found.into_iter().collect();
    Ok(unique.into_values().collect())
}
