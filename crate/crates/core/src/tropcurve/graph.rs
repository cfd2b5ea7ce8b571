use std::collections::{HashMap, HashSet};

use super::CurveError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub weight: u32,
}

/// An edge between vertex indices; `u == v` is a loop.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub u: usize,
    pub v: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Leg {
    pub id: String,
    pub vertex: usize,
}

/// A finite multigraph with vertex weights and an ordered list of legs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub legs: Vec<Leg>,
}

impl WeightedGraph {
    /// Checks that ids are unique and endpoints exist. Connectedness is not
    /// required here.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>, legs: Vec<Leg>) -> Result<Self, CurveError> {
        let mut seen = HashSet::new();
        for id in vertices
            .iter()
            .map(|v| &v.id)
            .chain(edges.iter().map(|e| &e.id))
            .chain(legs.iter().map(|l| &l.id))
        {
            if !seen.insert(id.as_str()) {
                return Err(CurveError::DuplicateId(id.clone()));
            }
        }
        let n = vertices.len();
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(CurveError::UnknownVertex(format!("#{} of edge {}", e.u.max(e.v), e.id)));
            }
        }
        for l in &legs {
            if l.vertex >= n {
                return Err(CurveError::UnknownVertex(format!("#{} of leg {}", l.vertex, l.id)));
            }
        }
        Ok(WeightedGraph { vertices, edges, legs })
    }

    /// Builds a graph from string ids: `(id, weight)`, `(id, u, v)`,
    /// `(id, vertex)`.
    pub fn from_ids(
        vertices: &[(&str, u32)],
        edges: &[(&str, &str, &str)],
        legs: &[(&str, &str)],
    ) -> Result<Self, CurveError> {
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect();
        let find = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| CurveError::UnknownVertex(id.to_string()))
        };
        let vs = vertices
            .iter()
            .map(|(id, w)| Vertex {
                id: id.to_string(),
                weight: *w,
            })
            .collect();
        let es = edges
            .iter()
            .map(|(id, u, v)| {
                Ok(Edge {
                    id: id.to_string(),
                    u: find(u)?,
                    v: find(v)?,
                })
            })
            .collect::<Result<_, CurveError>>()?;
        let ls = legs
            .iter()
            .map(|(id, v)| {
                Ok(Leg {
                    id: id.to_string(),
                    vertex: find(v)?,
                })
            })
            .collect::<Result<_, CurveError>>()?;
        WeightedGraph::new(vs, es, ls)
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// `|Star(v)|`: edge ends plus legs, loops counted twice.
    pub fn valence(&self, v: usize) -> usize {
        let ends: usize = self
            .edges
            .iter()
            .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
            .sum();
        ends + self.legs.iter().filter(|l| l.vertex == v).count()
    }

    pub fn legs_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.legs
            .iter()
            .enumerate()
            .filter(move |(_, l)| l.vertex == v)
            .map(|(i, _)| i)
    }

    /// Edge indices incident to `v`, loops once.
    pub fn edges_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.u == v || e.v == v)
            .map(|(i, _)| i)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn total_weight(&self) -> u64 {
        self.vertices.iter().map(|v| u64::from(v.weight)).sum()
    }
}

/// `g(G) = b_1(G) + Σ g(v)` for connected `G`.
pub fn genus(g: &WeightedGraph) -> Result<u64, CurveError> {
    if g.vertices.is_empty() {
        return Err(CurveError::Empty);
    }
    if !g.is_connected() {
        return Err(CurveError::Disconnected);
    }
    let b1 = g.edges.len() + 1 - g.vertices.len();
    Ok(b1 as u64 + g.total_weight())
}

/// Every vertex has `|Star(v)| + 2 g(v) >= 3`.
pub fn is_stable(g: &WeightedGraph) -> bool {
    (0..g.vertices.len()).all(|v| g.valence(v) + 2 * g.vertices[v].weight as usize >= 3)
}
