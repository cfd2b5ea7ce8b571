use std::collections::VecDeque;

use num_traits::Signed;

use super::{check_balanced, CombinatorialType, CurveError};
use crate::linalg::{Rat, RatVector};
use crate::report::ValidationReport;

/// A tropical curve of a given type together with vertex positions in
/// `N_R`. Legs have infinite length and carry no position data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterizedTropicalCurve {
    pub ty: CombinatorialType,
    pub lengths: Vec<Rat>,
    pub positions: Vec<RatVector>,
}

impl ParameterizedTropicalCurve {
    /// Checks shapes only; see [`ParameterizedTropicalCurve::validate`].
    pub fn new(ty: CombinatorialType, lengths: Vec<Rat>, positions: Vec<RatVector>) -> Result<Self, CurveError> {
        if lengths.len() != ty.graph.edges.len() {
            return Err(CurveError::Shape {
                what: "lengths".into(),
                expected: ty.graph.edges.len(),
                found: lengths.len(),
            });
        }
        if positions.len() != ty.graph.vertices.len() {
            return Err(CurveError::Shape {
                what: "positions".into(),
                expected: ty.graph.vertices.len(),
                found: positions.len(),
            });
        }
        if let Some(p) = positions.iter().find(|p| p.dim() != ty.dim) {
            return Err(CurveError::Shape {
                what: "position".into(),
                expected: ty.dim,
                found: p.dim(),
            });
        }
        Ok(ParameterizedTropicalCurve { ty, lengths, positions })
    }

    /// `h(v) - h(u) - ℓ(e) · slope(e)` for edge `e = (u, v)`.
    pub fn edge_defect(&self, e: usize) -> RatVector {
        let edge = &self.ty.graph.edges[e];
        let mut d = &self.positions[edge.v] - &self.positions[edge.u];
        let l = -self.lengths[e].clone();
        d.add_scaled_int(&l, &self.ty.edge_slopes[e]);
        d
    }

    /// Connectedness, positive lengths, the edge relation, and balancing.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if !self.ty.graph.is_connected() {
            report.push("CONNECTED", "graph", "graph is empty or disconnected");
        }
        for (e, edge) in self.ty.graph.edges.iter().enumerate() {
            let loc = format!("edge {}", edge.id);
            if !self.lengths[e].is_positive() {
                report.push(
                    "LENGTH",
                    loc.clone(),
                    format!("length {} is not positive", self.lengths[e]),
                );
            }
            let d = self.edge_defect(e);
            if !d.is_zero() {
                report.push("EDGE_RELATION", loc, format!("h(v) - h(u) - l*slope = {d}"));
            }
        }
        report.extend(check_balanced(&self.ty));
        report
    }
}

/// Places the curve by propagating positions from vertex 0 along a
/// breadth-first spanning tree, then checks every remaining edge.
pub fn realize(
    t: &CombinatorialType,
    lengths: &[Rat],
    root_position: &RatVector,
) -> Result<ParameterizedTropicalCurve, CurveError> {
    let g = &t.graph;
    if g.vertices.is_empty() {
        return Err(CurveError::Empty);
    }
    if lengths.len() != g.edges.len() {
        return Err(CurveError::Shape {
            what: "lengths".into(),
            expected: g.edges.len(),
            found: lengths.len(),
        });
    }
    if root_position.dim() != t.dim {
        return Err(CurveError::Shape {
            what: "root position".into(),
            expected: t.dim,
            found: root_position.dim(),
        });
    }
    if let Some(e) = (0..g.edges.len()).find(|&e| !lengths[e].is_positive()) {
        return Err(CurveError::NonPositiveLength(g.edges[e].id.clone()));
    }
    if !g.is_connected() {
        return Err(CurveError::Disconnected);
    }

    let n = g.vertices.len();
    let mut positions: Vec<Option<RatVector>> = vec![None; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut tree_edge = vec![false; g.edges.len()];
    positions[0] = Some(root_position.clone());
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for e in g.edges_at(x) {
            let edge = &g.edges[e];
            let y = if edge.u == x { edge.v } else { edge.u };
            if positions[y].is_some() {
                continue;
            }
            let mut p = positions[x].clone().expect("visited");
            p.add_scaled_int(&lengths[e], &t.slope_from(e, x));
            positions[y] = Some(p);
            parent[y] = Some((x, e));
            depth[y] = depth[x] + 1;
            tree_edge[e] = true;
            queue.push_back(y);
        }
    }
    let positions: Vec<RatVector> = positions.into_iter().map(|p| p.expect("connected")).collect();

    for (e, edge) in g.edges.iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let mut sum = &positions[edge.u] - &positions[edge.v];
        sum.add_scaled_int(&lengths[e], &t.edge_slopes[e]);
        if sum.is_zero() {
            continue;
        }
        // Fundamental cycle: the edge plus the tree paths to the meeting point.
        let (mut a, mut b) = (edge.u, edge.v);
        let mut left = Vec::new();
        let mut right = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let (p, pe) = parent[a].expect("non-root");
                left.push(pe);
                a = p;
            } else {
                let (p, pe) = parent[b].expect("non-root");
                right.push(pe);
                b = p;
            }
        }
        let mut cycle = vec![edge.id.clone()];
        cycle.extend(right.iter().map(|&x| g.edges[x].id.clone()));
        cycle.extend(left.iter().rev().map(|&x| g.edges[x].id.clone()));
        return Err(CurveError::CycleInconsistency { cycle, sum });
    }

    if let Some(v) = (0..g.vertices.len()).find(|&v| !t.balance_deficit(v).is_zero()) {
        return Err(CurveError::Unbalanced(g.vertices[v].id.clone()));
    }
    ParameterizedTropicalCurve::new(t.clone(), lengths.to_vec(), positions)
}

/// Forgets lengths and positions.
pub fn type_of(p: &ParameterizedTropicalCurve) -> CombinatorialType {
    p.ty.clone()
}
