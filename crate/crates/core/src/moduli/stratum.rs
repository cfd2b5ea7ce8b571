use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::ModuliError;
use crate::linalg::{nullspace, rank, LinearSystem, Rat, RatVector};
use crate::tropcurve::CombinatorialType;

/// The linear system cutting `M_Θ` out of `R^{|E|} × N_R^{|V|}`.
///
/// Coordinates are the edge lengths in edge order followed by the vertex
/// positions, vertex by vertex. Every edge `e = (u, v)` contributes the
/// equations `h(v) - h(u) - ℓ(e) · slope(e) = 0`; lengths are strictly
/// positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumDescriptor {
    pub ty: CombinatorialType,
    pub ambient_dim: usize,
    pub equalities: Vec<Vec<Rat>>,
}

impl StratumDescriptor {
    pub fn num_lengths(&self) -> usize {
        self.ty.graph.edges.len()
    }

    pub fn position_index(&self, vertex: usize, k: usize) -> usize {
        self.num_lengths() + vertex * self.ty.dim + k
    }

    pub fn rank(&self) -> usize {
        rank(&self.equalities, self.ambient_dim)
    }

    fn system(&self) -> LinearSystem {
        let mut s = LinearSystem::new(self.ambient_dim);
        for row in &self.equalities {
            s.add_eq(row.clone(), Rat::zero());
        }
        // The system is homogeneous, so ℓ > 0 is feasible iff ℓ >= 1 is.
        for e in 0..self.num_lengths() {
            let mut row = vec![Rat::zero(); self.ambient_dim];
            row[e] = Rat::one();
            s.add_ge(row, Rat::one());
        }
        s
    }

    /// A point of the stratum, if it is nonempty.
    pub fn interior_point(&self) -> Option<RatVector> {
        self.system().feasible_point().map(RatVector)
    }

    pub fn is_empty(&self) -> bool {
        self.interior_point().is_none()
    }

    /// `ambient_dim - rank` when nonempty.
    pub fn dim(&self) -> Option<usize> {
        self.interior_point().map(|_| self.ambient_dim - self.rank())
    }

    /// Random points of the stratum: an interior point moved along random
    /// combinations of the solution space, kept when all lengths stay
    /// positive.
    pub fn sample_points<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<RatVector> {
        let Some(base) = self.interior_point() else {
            return Vec::new();
        };
        let directions = nullspace(&self.equalities, self.ambient_dim);
        let mut out = Vec::with_capacity(count);
        let mut scale = Rat::one();
        while out.len() < count {
            let mut x = base.clone();
            for d in &directions {
                let c = Rat::new(rng.gen_range(-60i64..=60).into(), 60.into()) * &scale;
                x.add_scaled(&c, d);
            }
            if x.0[..self.num_lengths()].iter().all(Signed::is_positive) {
                out.push(x);
            } else {
                scale /= Rat::from_integer(2.into());
            }
        }
        out
    }
}

/// Builds the defining system of `M_Θ`.
pub fn stratum(t: &CombinatorialType) -> Result<StratumDescriptor, ModuliError> {
    if let Some(v) = (0..t.graph.vertices.len()).find(|&v| !t.balance_deficit(v).is_zero()) {
        return Err(ModuliError::UnbalancedType(t.graph.vertices[v].id.clone()));
    }
    let ne = t.graph.edges.len();
    let n = t.dim;
    let ambient_dim = ne + n * t.graph.vertices.len();
    let mut equalities = Vec::with_capacity(ne * n);
    for (e, edge) in t.graph.edges.iter().enumerate() {
        for k in 0..n {
            let mut row = vec![Rat::zero(); ambient_dim];
            row[ne + edge.v * n + k] += Rat::one();
            row[ne + edge.u * n + k] -= Rat::one();
            row[e] = -Rat::from_integer(t.edge_slopes[e].0[k].into());
            equalities.push(row);
        }
    }
    Ok(StratumDescriptor {
        ty: t.clone(),
        ambient_dim,
        equalities,
    })
}

/// Dimension of `M_Θ`, or `None` when the stratum is empty.
pub fn dim_stratum(t: &CombinatorialType) -> Result<Option<usize>, ModuliError> {
    Ok(stratum(t)?.dim())
}
