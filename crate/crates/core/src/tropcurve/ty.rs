use super::{CurveError, WeightedGraph};
use crate::linalg::IntVector;
use crate::report::ValidationReport;

/// A weighted graph with an integral slope on every edge and leg.
///
/// Edge slopes are stored for the orientation `u → v` of the edge record;
/// the reverse orientation carries the negated slope. Legs point away from
/// their vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombinatorialType {
    pub graph: WeightedGraph,
    pub edge_slopes: Vec<IntVector>,
    pub leg_slopes: Vec<IntVector>,
    /// Rank of the lattice `N`.
    pub dim: usize,
}

/// Leg slopes in leg order, and the same with zero slopes removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Degree {
    pub extended: Vec<IntVector>,
    pub reduced: Vec<IntVector>,
}

impl CombinatorialType {
    pub fn new(
        graph: WeightedGraph,
        edge_slopes: Vec<IntVector>,
        leg_slopes: Vec<IntVector>,
        dim: usize,
    ) -> Result<Self, CurveError> {
        let shape = |what: &str, expected, found| CurveError::Shape {
            what: what.to_string(),
            expected,
            found,
        };
        if edge_slopes.len() != graph.edges.len() {
            return Err(shape("edge slopes", graph.edges.len(), edge_slopes.len()));
        }
        if leg_slopes.len() != graph.legs.len() {
            return Err(shape("leg slopes", graph.legs.len(), leg_slopes.len()));
        }
        for s in edge_slopes.iter().chain(&leg_slopes) {
            if s.dim() != dim {
                return Err(shape("slope", dim, s.dim()));
            }
        }
        Ok(CombinatorialType {
            graph,
            edge_slopes,
            leg_slopes,
            dim,
        })
    }

    /// Slope of edge `e` leaving vertex `from`. For a loop this is the
    /// stored orientation.
    pub fn slope_from(&self, e: usize, from: usize) -> IntVector {
        let edge = &self.graph.edges[e];
        if edge.u == from {
            self.edge_slopes[e].clone()
        } else {
            debug_assert_eq!(edge.v, from);
            -&self.edge_slopes[e]
        }
    }

    /// Outgoing slopes of every element of `Star(v)`.
    pub fn star(&self, v: usize) -> Vec<IntVector> {
        let mut out = Vec::new();
        for (i, e) in self.graph.edges.iter().enumerate() {
            if e.u == v {
                out.push(self.edge_slopes[i].clone());
            }
            if e.v == v {
                out.push(-&self.edge_slopes[i]);
            }
        }
        out.extend(self.graph.legs_at(v).map(|l| self.leg_slopes[l].clone()));
        out
    }

    /// `Σ_{ē ∈ Star(v)} slope(ē)`.
    pub fn balance_deficit(&self, v: usize) -> IntVector {
        self.star(v).iter().fold(IntVector::zeros(self.dim), |acc, s| &acc + s)
    }

    pub fn is_balanced(&self) -> bool {
        (0..self.graph.vertices.len()).all(|v| self.balance_deficit(v).is_zero())
    }

    pub fn degree(&self) -> Degree {
        Degree {
            extended: self.leg_slopes.clone(),
            reduced: self.leg_slopes.iter().filter(|s| !s.is_zero()).cloned().collect(),
        }
    }
}

/// Lists every vertex whose outgoing slopes do not sum to zero.
pub fn check_balanced(t: &CombinatorialType) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (v, vertex) in t.graph.vertices.iter().enumerate() {
        let d = t.balance_deficit(v);
        if !d.is_zero() {
            report.push("BALANCING", format!("vertex {}", vertex.id), format!("slope sum {d}"));
        }
    }
    report
}
