use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::linalg::IntVector;
use crate::tropcurve::{CombinatorialType, Edge, Leg, Vertex, WeightedGraph};

/// An isomorphism of combinatorial types fixing every leg. Edge `e` maps to
/// `edge_map[e]`, traversed backwards when `edge_reversed[e]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeIso {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub edge_reversed: Vec<bool>,
}

impl TypeIso {
    pub fn identity(t: &CombinatorialType) -> Self {
        TypeIso {
            vertex_map: (0..t.graph.vertices.len()).collect(),
            edge_map: (0..t.graph.edges.len()).collect(),
            edge_reversed: vec![false; t.graph.edges.len()],
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &TypeIso) -> TypeIso {
        TypeIso {
            vertex_map: first.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            edge_map: first.edge_map.iter().map(|&e| self.edge_map[e]).collect(),
            edge_reversed: first
                .edge_map
                .iter()
                .zip(&first.edge_reversed)
                .map(|(&e, &r)| r ^ self.edge_reversed[e])
                .collect(),
        }
    }

    pub fn inverse(&self) -> TypeIso {
        let mut vertex_map = vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vertex_map[w] = v;
        }
        let mut edge_map = vec![0; self.edge_map.len()];
        let mut edge_reversed = vec![false; self.edge_map.len()];
        for (e, &f) in self.edge_map.iter().enumerate() {
            edge_map[f] = e;
            edge_reversed[f] = self.edge_reversed[e];
        }
        TypeIso {
            vertex_map,
            edge_map,
            edge_reversed,
        }
    }

    /// Checks that this is an isomorphism `a → b`.
    pub fn is_valid(&self, a: &CombinatorialType, b: &CombinatorialType) -> bool {
        let (ga, gb) = (&a.graph, &b.graph);
        if self.vertex_map.len() != ga.vertices.len()
            || self.edge_map.len() != ga.edges.len()
            || ga.vertices.len() != gb.vertices.len()
            || ga.edges.len() != gb.edges.len()
            || a.leg_slopes != b.leg_slopes
        {
            return false;
        }
        let mut hit = vec![false; gb.vertices.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            if w >= hit.len() || hit[w] || ga.vertices[v].weight != gb.vertices[w].weight {
                return false;
            }
            hit[w] = true;
        }
        let mut hit = vec![false; gb.edges.len()];
        for (e, &f) in self.edge_map.iter().enumerate() {
            if f >= hit.len() || hit[f] {
                return false;
            }
            hit[f] = true;
            let (ea, eb) = (&ga.edges[e], &gb.edges[f]);
            let (u, v, s) = if self.edge_reversed[e] {
                (eb.v, eb.u, -&b.edge_slopes[f])
            } else {
                (eb.u, eb.v, b.edge_slopes[f].clone())
            };
            if self.vertex_map[ea.u] != u || self.vertex_map[ea.v] != v || a.edge_slopes[e] != s {
                return false;
            }
        }
        ga.legs
            .iter()
            .zip(&gb.legs)
            .all(|(la, lb)| self.vertex_map[la.vertex] == lb.vertex)
    }
}

/// Slopes of edges from `x` to `y`, oriented `x → y`; loops up to sign.
fn pair_signature(t: &CombinatorialType, x: usize, y: usize) -> Vec<IntVector> {
    let mut out = Vec::new();
    for (e, edge) in t.graph.edges.iter().enumerate() {
        let s = &t.edge_slopes[e];
        if x == y {
            if edge.u == x && edge.v == x {
                out.push(s.clone().max(-s));
            }
        } else if edge.u == x && edge.v == y {
            out.push(s.clone());
        } else if edge.u == y && edge.v == x {
            out.push(-s);
        }
    }
    out.sort();
    out
}

fn local_signature(t: &CombinatorialType, v: usize) -> (u32, usize, Vec<IntVector>, Vec<usize>) {
    let mut star = t.star(v);
    star.sort();
    let legs: Vec<usize> = t.graph.legs_at(v).collect();
    (t.graph.vertices[v].weight, star.len(), star, legs)
}

fn shape_matches(a: &CombinatorialType, b: &CombinatorialType) -> bool {
    a.dim == b.dim
        && a.graph.vertices.len() == b.graph.vertices.len()
        && a.graph.edges.len() == b.graph.edges.len()
        && a.graph.legs.len() == b.graph.legs.len()
        && a.leg_slopes == b.leg_slopes
}

/// All isomorphisms `a → b` (up to `limit` of them), by backtracking over
/// vertex maps compatible with weights, stars, legs and edge multisets,
/// then over edge bijections.
pub fn isomorphisms(a: &CombinatorialType, b: &CombinatorialType, limit: Option<usize>) -> Vec<TypeIso> {
    let mut out = Vec::new();
    if !shape_matches(a, b) {
        return out;
    }
    let n = a.graph.vertices.len();
    let sig_a: Vec<_> = (0..n).map(|v| local_signature(a, v)).collect();
    let sig_b: Vec<_> = (0..n).map(|v| local_signature(b, v)).collect();
    // Vertices carrying legs first, then by decreasing valence.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (sig_a[v].3.is_empty(), std::cmp::Reverse(sig_a[v].1), v));

    struct Search<'a> {
        a: &'a CombinatorialType,
        b: &'a CombinatorialType,
        order: Vec<usize>,
        sig_a: Vec<(u32, usize, Vec<IntVector>, Vec<usize>)>,
        sig_b: Vec<(u32, usize, Vec<IntVector>, Vec<usize>)>,
        vmap: Vec<Option<usize>>,
        used: Vec<bool>,
        limit: Option<usize>,
    }

    impl Search<'_> {
        fn full(&self, out: &[TypeIso]) -> bool {
            self.limit.is_some_and(|l| out.len() >= l)
        }

        fn vertices(&mut self, depth: usize, out: &mut Vec<TypeIso>) {
            if self.full(out) {
                return;
            }
            if depth == self.order.len() {
                let vmap: Vec<usize> = self.vmap.iter().map(|x| x.expect("assigned")).collect();
                let ne = self.a.graph.edges.len();
                let mut emap = vec![0; ne];
                let mut rev = vec![false; ne];
                let mut used = vec![false; ne];
                self.edges(0, &vmap, &mut emap, &mut rev, &mut used, out);
                return;
            }
            let x = self.order[depth];
            for y in 0..self.order.len() {
                if self.used[y] || self.sig_a[x] != self.sig_b[y] {
                    continue;
                }
                self.vmap[x] = Some(y);
                let consistent = self.order[..=depth].iter().all(|&z| {
                    let fz = self.vmap[z].expect("assigned");
                    pair_signature(self.a, x, z) == pair_signature(self.b, y, fz)
                });
                if consistent {
                    self.used[y] = true;
                    self.vertices(depth + 1, out);
                    self.used[y] = false;
                }
                self.vmap[x] = None;
            }
        }

        fn edges(
            &self,
            e: usize,
            vmap: &[usize],
            emap: &mut Vec<usize>,
            rev: &mut Vec<bool>,
            used: &mut Vec<bool>,
            out: &mut Vec<TypeIso>,
        ) {
            if self.full(out) {
                return;
            }
            let ga = &self.a.graph;
            if e == ga.edges.len() {
                out.push(TypeIso {
                    vertex_map: vmap.to_vec(),
                    edge_map: emap.clone(),
                    edge_reversed: rev.clone(),
                });
                return;
            }
            let ea = &ga.edges[e];
            let (u, v) = (vmap[ea.u], vmap[ea.v]);
            let s = &self.a.edge_slopes[e];
            for (f, eb) in self.b.graph.edges.iter().enumerate() {
                if used[f] {
                    continue;
                }
                let t = &self.b.edge_slopes[f];
                for reversed in [false, true] {
                    let fits = if reversed {
                        eb.v == u && eb.u == v && *s == -t
                    } else {
                        eb.u == u && eb.v == v && s == t
                    };
                    if fits {
                        used[f] = true;
                        emap[e] = f;
                        rev[e] = reversed;
                        self.edges(e + 1, vmap, emap, rev, used, out);
                        used[f] = false;
                    }
                }
            }
        }
    }

    let mut search = Search {
        a,
        b,
        order,
        sig_a,
        sig_b,
        vmap: vec![None; n],
        used: vec![false; n],
        limit,
    };
    search.vertices(0, &mut out);
    out
}

pub fn find_isomorphism(a: &CombinatorialType, b: &CombinatorialType) -> Option<TypeIso> {
    isomorphisms(a, b, Some(1)).into_iter().next()
}

pub fn is_isomorphic(a: &CombinatorialType, b: &CombinatorialType) -> bool {
    find_isomorphism(a, b).is_some()
}

/// `Aut(Θ)`: isomorphisms of `t` with itself fixing the legs.
pub fn automorphisms(t: &CombinatorialType) -> Vec<TypeIso> {
    isomorphisms(t, t, None)
}

/// Ranks signatures so that equal signatures share a color and the color
/// order follows the signature order.
fn rank_colors<S: Ord + Clone>(sigs: &[S]) -> Vec<usize> {
    let mut distinct: Vec<S> = sigs.to_vec();
    distinct.sort();
    distinct.dedup();
    sigs.iter()
        .map(|s| distinct.binary_search(s).expect("present"))
        .collect()
}

fn refine(t: &CombinatorialType, mut colors: Vec<usize>) -> Vec<usize> {
    let n = colors.len();
    loop {
        let classes = colors.iter().collect::<std::collections::BTreeSet<_>>().len();
        let sigs: Vec<(usize, Vec<(usize, IntVector)>)> = (0..n)
            .map(|v| {
                let mut nb = Vec::new();
                for (e, edge) in t.graph.edges.iter().enumerate() {
                    if edge.u == v {
                        nb.push((colors[edge.v], t.edge_slopes[e].clone()));
                    }
                    if edge.v == v {
                        nb.push((colors[edge.u], -&t.edge_slopes[e]));
                    }
                }
                nb.sort();
                (colors[v], nb)
            })
            .collect();
        let next = rank_colors(&sigs);
        let next_classes = next.iter().collect::<std::collections::BTreeSet<_>>().len();
        colors = next;
        if next_classes == classes {
            return colors;
        }
    }
}

/// Serializes `t` with vertex `v` placed at `position[v]`.
fn encode(t: &CombinatorialType, position: &[usize]) -> String {
    let n = position.len();
    let mut by_pos = vec![0; n];
    for (v, &p) in position.iter().enumerate() {
        by_pos[p] = v;
    }
    let mut s = format!("d{}|w", t.dim);
    for &v in &by_pos {
        write!(s, "{},", t.graph.vertices[v].weight).expect("string write");
    }
    s.push_str("|l");
    for (l, leg) in t.graph.legs.iter().enumerate() {
        write!(s, "{}:{},", position[leg.vertex], t.leg_slopes[l]).expect("string write");
    }
    s.push_str("|e");
    for (a, b, slope) in normalized_edges(t, position) {
        write!(s, "{a}-{b}:{slope},").expect("string write");
    }
    s
}

/// Edges as `(position, position, slope)` oriented from the lower
/// position, loops with the larger of the two slopes, sorted.
fn normalized_edges(t: &CombinatorialType, position: &[usize]) -> Vec<(usize, usize, IntVector)> {
    let mut edges: Vec<(usize, usize, IntVector)> = t
        .graph
        .edges
        .iter()
        .zip(&t.edge_slopes)
        .map(|(e, s)| {
            let (a, b) = (position[e.u], position[e.v]);
            if a < b {
                (a, b, s.clone())
            } else if a > b {
                (b, a, -s)
            } else {
                (a, a, s.clone().max(-s))
            }
        })
        .collect();
    edges.sort();
    edges
}

/// Canonical vertex positions: color refinement, then individualization
/// of the first non-singleton cell, keeping the lexicographically least
/// encoding.
fn canonical_positions(t: &CombinatorialType) -> (String, Vec<usize>) {
    let n = t.graph.vertices.len();
    let initial: Vec<_> = (0..n)
        .map(|v| {
            let legs: Vec<(usize, IntVector)> = t.graph.legs_at(v).map(|l| (l, t.leg_slopes[l].clone())).collect();
            let (w, val, star, _) = local_signature(t, v);
            (w, val, star, legs)
        })
        .collect();
    let colors = refine(t, rank_colors(&initial));
    let mut best: Option<(String, Vec<usize>)> = None;
    search_canonical(t, colors, &mut best);
    best.expect("at least one leaf")
}

fn search_canonical(t: &CombinatorialType, colors: Vec<usize>, best: &mut Option<(String, Vec<usize>)>) {
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    match cells.values().find(|c| c.len() > 1) {
        None => {
            let code = encode(t, &colors);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, colors));
            }
        }
        Some(cell) => {
            for &v in cell {
                let mut split: Vec<usize> = colors.iter().map(|c| 2 * c + 1).collect();
                split[v] -= 1;
                let refined = refine(t, rank_colors(&split));
                search_canonical(t, refined, best);
            }
        }
    }
}

/// A string that two types share iff they are isomorphic.
pub fn canonical_form(t: &CombinatorialType) -> String {
    canonical_positions(t).0
}

/// `t` relabeled canonically: vertices `v0, v1, …` in canonical order,
/// edges `e0, e1, …` sorted and oriented from the lower vertex. Leg ids
/// and order are kept.
pub fn canonical_type(t: &CombinatorialType) -> CombinatorialType {
    let (_, position) = canonical_positions(t);
    let n = position.len();
    let mut by_pos = vec![0; n];
    for (v, &p) in position.iter().enumerate() {
        by_pos[p] = v;
    }
    let vertices = by_pos
        .iter()
        .enumerate()
        .map(|(i, &v)| Vertex {
            id: format!("v{i}"),
            weight: t.graph.vertices[v].weight,
        })
        .collect();
    let normalized = normalized_edges(t, &position);
    let edges = normalized
        .iter()
        .enumerate()
        .map(|(j, (a, b, _))| Edge {
            id: format!("e{j}"),
            u: *a,
            v: *b,
        })
        .collect();
    let slopes = normalized.into_iter().map(|(_, _, s)| s).collect();
    let legs = t
        .graph
        .legs
        .iter()
        .map(|l| Leg {
            id: l.id.clone(),
            vertex: position[l.vertex],
        })
        .collect();
    let graph = WeightedGraph::new(vertices, edges, legs).expect("relabeling keeps the graph valid");
    CombinatorialType::new(graph, slopes, t.leg_slopes.clone(), t.dim).expect("relabeling keeps shapes")
}
