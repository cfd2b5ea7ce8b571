use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::iso::{canonical_form, canonical_type};
use super::ops::{classify, contract_any, resolve_4valent, WallKind};
use super::stratum::stratum;
use super::ModuliError;
use crate::tropcurve::{genus, CombinatorialType};

/// An almost 3-valent type together with the nodes its resolutions hit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub ty: CombinatorialType,
    pub key: String,
    pub resolutions: Vec<usize>,
}

/// Weightless 3-valent types (nodes) joined through the walls they share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallGraph {
    pub nodes: Vec<CombinatorialType>,
    pub node_keys: Vec<String>,
    pub walls: Vec<Wall>,
}

impl WallGraph {
    pub fn node_index(&self, t: &CombinatorialType) -> Option<usize> {
        let key = canonical_form(t);
        self.node_keys.binary_search(&key).ok()
    }

    /// Walls incident to each node.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for (w, wall) in self.walls.iter().enumerate() {
            for &n in &wall.resolutions {
                out[n].push(w);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PathStep {
    Node(usize),
    Wall(usize),
}

/// Builds the wall graph of the given types. Walls are found by contracting
/// single bounded non-loop edges of the nodes; a wall is kept when its
/// stratum is nonempty, and it is incident to the nodes among its
/// resolutions.
pub fn wall_graph(types: &[CombinatorialType]) -> Result<WallGraph, ModuliError> {
    let mut nodes: BTreeMap<String, CombinatorialType> = BTreeMap::new();
    let mut invariants = None;
    for t in types {
        if classify(t).kind != WallKind::Weightless3Valent {
            return Err(ModuliError::NotWeightless3Valent(canonical_form(t)));
        }
        let inv = (genus(&t.graph)?, t.leg_slopes.clone());
        match &invariants {
            None => invariants = Some(inv),
            Some(first) if *first != inv => {
                return Err(ModuliError::MixedInvariants(format!(
                    "genus {} with degree {:?} against genus {} with degree {:?}",
                    first.0,
                    first.1.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    inv.0,
                    inv.1.iter().map(ToString::to_string).collect::<Vec<_>>()
                )));
            }
            Some(_) => {}
        }
        let c = canonical_type(t);
        nodes.insert(canonical_form(&c), c);
    }
    let node_keys: Vec<String> = nodes.keys().cloned().collect();
    let nodes: Vec<CombinatorialType> = nodes.into_values().collect();

    let mut walls: BTreeMap<String, CombinatorialType> = BTreeMap::new();
    for t in &nodes {
        for (e, edge) in t.graph.edges.iter().enumerate() {
            if edge.u == edge.v {
                continue;
            }
            let w = canonical_type(&contract_any(t, &[e])?);
            if classify(&w).kind != WallKind::WeightlessAlmost3Valent {
                continue;
            }
            let key = canonical_form(&w);
            if walls.contains_key(&key) || stratum(&w)?.is_empty() {
                continue;
            }
            walls.insert(key, w);
        }
    }
    let walls = walls
        .into_iter()
        .map(|(key, ty)| {
            let v = classify(&ty).four_valent_vertex.expect("almost 3-valent");
            let mut resolutions: Vec<usize> = resolve_4valent(&ty, v)?
                .iter()
                .filter_map(|r| node_keys.binary_search(&canonical_form(&r.ty)).ok())
                .collect();
            resolutions.sort_unstable();
            resolutions.dedup();
            Ok(Wall { ty, key, resolutions })
        })
        .collect::<Result<Vec<_>, ModuliError>>()?;
    Ok(WallGraph {
        nodes,
        node_keys,
        walls,
    })
}

/// Breadth-first search from `from` to `to` through walls. The path
/// alternates nodes and walls and starts and ends at nodes.
pub fn connected_through_walls(
    wg: &WallGraph,
    from: &CombinatorialType,
    to: &CombinatorialType,
) -> Result<Option<Vec<PathStep>>, ModuliError> {
    let find = |t: &CombinatorialType| {
        wg.node_index(t)
            .ok_or_else(|| ModuliError::NotInGraph(canonical_form(t)))
    };
    let (s, goal) = (find(from)?, find(to)?);
    let incidence = wg.incidence();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; wg.nodes.len()];
    let mut seen = vec![false; wg.nodes.len()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if x == goal {
            let mut path = vec![PathStep::Node(x)];
            let mut cur = x;
            while let Some((p, w)) = prev[cur] {
                path.push(PathStep::Wall(w));
                path.push(PathStep::Node(p));
                cur = p;
            }
            path.reverse();
            return Ok(Some(path));
        }
        for &w in &incidence[x] {
            for &y in &wg.walls[w].resolutions {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, w));
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(None)
}
