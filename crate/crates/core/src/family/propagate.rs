use std::collections::{BTreeSet, VecDeque};

use super::FamilyError;
use crate::moduli::{canonical_form, WallGraph};
use crate::tropcurve::CombinatorialType;

/// A wall that fired, with the nodes it added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationStep {
    pub wall: usize,
    pub from: usize,
    pub added: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagation {
    pub nodes: BTreeSet<usize>,
    pub trace: Vec<PropagationStep>,
}

/// Saturates the seed nodes: whenever a node of a wall is in the set, all
/// nodes of that wall join it.
pub fn propagate_closure(wg: &WallGraph, seeds: &[CombinatorialType]) -> Result<Propagation, FamilyError> {
    let mut start = BTreeSet::new();
    for s in seeds {
        let i = wg
            .node_index(s)
            .ok_or_else(|| FamilyError::SeedNotInGraph(canonical_form(s)))?;
        start.insert(i);
    }
    Ok(propagate_indices(wg, &start))
}

/// [`propagate_closure`] on node indices.
pub fn propagate_indices(wg: &WallGraph, seeds: &BTreeSet<usize>) -> Propagation {
    let incidence = wg.incidence();
    let mut nodes = seeds.clone();
    let mut fired = vec![false; wg.walls.len()];
    let mut trace = Vec::new();
    let mut queue: VecDeque<usize> = seeds.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for &w in &incidence[x] {
            if fired[w] {
                continue;
            }
            fired[w] = true;
            let added: Vec<usize> = wg.walls[w]
                .resolutions
                .iter()
                .copied()
                .filter(|&y| nodes.insert(y))
                .collect();
            queue.extend(&added);
            trace.push(PropagationStep {
                wall: w,
                from: x,
                added,
            });
        }
    }
    Propagation { nodes, trace }
}
