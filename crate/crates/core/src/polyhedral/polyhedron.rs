use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::linalg::{rank, rat, IntVector, Rat, RatVector, Subspace};

/// `⟨normal, x⟩ >= offset`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: IntVector,
    pub offset: Rat,
}

/// `⟨normal, x⟩ = offset`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: IntVector,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<i64>, offset: Rat) -> Self {
        Halfspace {
            normal: IntVector(normal),
            offset,
        }
    }

    /// `⟨normal, x⟩ - offset`
    pub fn slack(&self, x: &RatVector) -> Rat {
        x.dot(&self.normal.to_rat().0) - &self.offset
    }

    pub fn derivative(&self, d: &RatVector) -> Rat {
        d.dot(&self.normal.to_rat().0)
    }
}

impl Hyperplane {
    pub fn new(normal: Vec<i64>, offset: Rat) -> Self {
        Hyperplane {
            normal: IntVector(normal),
            offset,
        }
    }

    pub fn slack(&self, x: &RatVector) -> Rat {
        x.dot(&self.normal.to_rat().0) - &self.offset
    }
}

/// Vertices, extreme rays and a lineality basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Generators {
    pub vertices: Vec<RatVector>,
    pub rays: Vec<RatVector>,
    pub lines: Vec<RatVector>,
}

/// A nonempty face of a polyhedron, as indices into its generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFace {
    pub vertices: BTreeSet<usize>,
    pub rays: BTreeSet<usize>,
    pub dim: usize,
}

/// An H-described polyhedron with integral normals. The V-description is
/// computed on demand and cached.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    ambient_dim: usize,
    inequalities: Vec<Halfspace>,
    equalities: Vec<Hyperplane>,
    generators: OnceLock<Generators>,
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.inequalities == other.inequalities
            && self.equalities == other.equalities
    }
}

impl Eq for Polyhedron {}

impl Polyhedron {
    pub fn new(ambient_dim: usize, inequalities: Vec<Halfspace>, equalities: Vec<Hyperplane>) -> Self {
        for h in &inequalities {
            assert_eq!(h.normal.dim(), ambient_dim, "halfspace dimension mismatch");
        }
        for h in &equalities {
            assert_eq!(h.normal.dim(), ambient_dim, "hyperplane dimension mismatch");
        }
        Polyhedron {
            ambient_dim,
            inequalities,
            equalities,
            generators: OnceLock::new(),
        }
    }

    /// The single point `R^0`.
    pub fn point() -> Self {
        Polyhedron::new(0, Vec::new(), Vec::new())
    }

    /// The orthant `R^n_{>=0}`.
    pub fn orthant(n: usize) -> Self {
        let ineqs = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                Halfspace::new(v, Rat::zero())
            })
            .collect();
        Polyhedron::new(n, ineqs, Vec::new())
    }

    /// The interval `[lo, hi]` in `R^1`.
    pub fn interval(lo: Rat, hi: Rat) -> Self {
        Polyhedron::new(
            1,
            vec![Halfspace::new(vec![1], lo), Halfspace::new(vec![-1], -hi)],
            Vec::new(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn inequalities(&self) -> &[Halfspace] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Hyperplane] {
        &self.equalities
    }

    pub fn contains(&self, x: &RatVector) -> bool {
        x.dim() == self.ambient_dim
            && self.equalities.iter().all(|h| h.slack(x).is_zero())
            && self.inequalities.iter().all(|h| !h.slack(x).is_negative())
    }

    /// Strict inequality on every constraint that is not an implicit
    /// equality of the polyhedron.
    pub fn in_relative_interior(&self, x: &RatVector) -> bool {
        if !self.contains(x) {
            return false;
        }
        let implicit = self.implicit_equalities();
        self.inequalities
            .iter()
            .enumerate()
            .all(|(i, h)| implicit.contains(&i) || h.slack(x).is_positive())
    }

    /// Whether `d` lies in the recession cone.
    pub fn recedes_along(&self, d: &RatVector) -> bool {
        self.equalities.iter().all(|h| d.dot(&h.normal.to_rat().0).is_zero())
            && self.inequalities.iter().all(|h| !h.derivative(d).is_negative())
    }

    pub fn generators(&self) -> &Generators {
        self.generators.get_or_init(|| double_description(self))
    }

    pub fn is_empty(&self) -> bool {
        self.generators().vertices.is_empty()
    }

    /// Direction space of the affine hull. Zero for the empty polyhedron.
    pub fn lin_space(&self) -> Subspace {
        let g = self.generators();
        let mut dirs: Vec<RatVector> = Vec::new();
        if let Some(v0) = g.vertices.first() {
            dirs.extend(g.vertices.iter().skip(1).map(|v| v - v0));
        }
        dirs.extend(g.rays.iter().cloned());
        dirs.extend(g.lines.iter().cloned());
        Subspace::span(self.ambient_dim, dirs).expect("generators share the ambient dimension")
    }

    /// Dimension, or `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        if self.is_empty() {
            None
        } else {
            Some(self.lin_space().dim())
        }
    }

    /// A point of the relative interior: vertex barycenter plus the sum of
    /// all rays.
    pub fn relative_interior_point(&self) -> Option<RatVector> {
        let g = self.generators();
        if g.vertices.is_empty() {
            return None;
        }
        let mut p = RatVector::zeros(self.ambient_dim);
        let w = Rat::new(One::one(), (g.vertices.len() as i64).into());
        for v in &g.vertices {
            p.add_scaled(&w, v);
        }
        for r in &g.rays {
            p.add_scaled(&Rat::one(), r);
        }
        Some(p)
    }

    /// Inequalities tight on the whole polyhedron.
    pub fn implicit_equalities(&self) -> BTreeSet<usize> {
        let g = self.generators();
        self.inequalities
            .iter()
            .enumerate()
            .filter(|(_, h)| {
                g.vertices.iter().all(|v| h.slack(v).is_zero()) && g.rays.iter().all(|r| h.derivative(r).is_zero())
            })
            .map(|(i, _)| i)
            .collect()
    }

    fn face_dim(&self, vertices: &BTreeSet<usize>, rays: &BTreeSet<usize>) -> usize {
        let g = self.generators();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut it = vertices.iter();
        if let Some(&v0) = it.next() {
            for &v in it {
                rows.push((&g.vertices[v] - &g.vertices[v0]).0);
            }
        }
        rows.extend(rays.iter().map(|&r| g.rays[r].0.clone()));
        rows.extend(g.lines.iter().map(|l| l.0.clone()));
        rank(&rows, self.ambient_dim)
    }

    /// The smallest face containing the given generator subsets: generators
    /// tight on every inequality tight at all of them.
    pub fn tight_inequalities(&self, points: &[RatVector], directions: &[RatVector]) -> BTreeSet<usize> {
        self.inequalities
            .iter()
            .enumerate()
            .filter(|(_, h)| {
                points.iter().all(|p| h.slack(p).is_zero()) && directions.iter().all(|d| h.derivative(d).is_zero())
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// The face cut out by making the given inequalities tight, if
    /// nonempty.
    pub fn face_of_tight_set(&self, tight: &BTreeSet<usize>) -> Option<PolyFace> {
        let g = self.generators();
        let vertices: BTreeSet<usize> = (0..g.vertices.len())
            .filter(|&v| {
                tight
                    .iter()
                    .all(|&i| self.inequalities[i].slack(&g.vertices[v]).is_zero())
            })
            .collect();
        if vertices.is_empty() {
            return None;
        }
        let rays: BTreeSet<usize> = (0..g.rays.len())
            .filter(|&r| {
                tight
                    .iter()
                    .all(|&i| self.inequalities[i].derivative(&g.rays[r]).is_zero())
            })
            .collect();
        let dim = self.face_dim(&vertices, &rays);
        Some(PolyFace { vertices, rays, dim })
    }

    /// All nonempty faces, the polyhedron itself included, sorted by
    /// dimension then generator sets.
    pub fn faces(&self) -> Vec<PolyFace> {
        let g = self.generators();
        if g.vertices.is_empty() {
            return Vec::new();
        }
        let all_v: BTreeSet<usize> = (0..g.vertices.len()).collect();
        let all_r: BTreeSet<usize> = (0..g.rays.len()).collect();
        let top = PolyFace {
            dim: self.face_dim(&all_v, &all_r),
            vertices: all_v,
            rays: all_r,
        };
        let mut seen: HashSet<(BTreeSet<usize>, BTreeSet<usize>)> = HashSet::new();
        seen.insert((top.vertices.clone(), top.rays.clone()));
        let mut out = vec![top.clone()];
        let mut queue = vec![top];
        while let Some(face) = queue.pop() {
            for h in &self.inequalities {
                let vertices: BTreeSet<usize> = face
                    .vertices
                    .iter()
                    .copied()
                    .filter(|&v| h.slack(&g.vertices[v]).is_zero())
                    .collect();
                if vertices.is_empty() {
                    continue;
                }
                let rays: BTreeSet<usize> = face
                    .rays
                    .iter()
                    .copied()
                    .filter(|&r| h.derivative(&g.rays[r]).is_zero())
                    .collect();
                if vertices == face.vertices && rays == face.rays {
                    continue;
                }
                if seen.insert((vertices.clone(), rays.clone())) {
                    let dim = self.face_dim(&vertices, &rays);
                    let f = PolyFace { vertices, rays, dim };
                    out.push(f.clone());
                    queue.push(f);
                }
            }
        }
        out.sort_by(|a, b| (a.dim, &a.vertices, &a.rays).cmp(&(b.dim, &b.vertices, &b.rays)));
        out
    }
}

fn normalize(v: Vec<Rat>) -> Vec<Rat> {
    RatVector(v)
        .to_primitive_integral()
        .into_iter()
        .map(Rat::from_integer)
        .collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Motzkin double description on the homogenization
/// `{(x, t) : ⟨a, x⟩ - b t >= 0, t >= 0}`.
fn double_description(p: &Polyhedron) -> Generators {
    let n = p.ambient_dim + 1;
    let homog = |normal: &IntVector, offset: &Rat| -> Vec<Rat> {
        let mut row: Vec<Rat> = normal.0.iter().map(|&x| rat(x)).collect();
        row.push(-offset.clone());
        row
    };

    let mut lines: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut v = vec![Rat::zero(); n];
            v[i] = Rat::one();
            v
        })
        .collect();
    let mut rays: Vec<Vec<Rat>> = Vec::new();
    let mut processed: Vec<Vec<Rat>> = Vec::new();

    let mut t_row = vec![Rat::zero(); n];
    t_row[n - 1] = Rat::one();
    let mut constraints: Vec<(Vec<Rat>, bool)> = vec![(t_row, false)];
    constraints.extend(p.equalities.iter().map(|h| (homog(&h.normal, &h.offset), true)));
    constraints.extend(p.inequalities.iter().map(|h| (homog(&h.normal, &h.offset), false)));

    for (h, is_eq) in constraints {
        if let Some(li) = lines.iter().position(|l| !dot(&h, l).is_zero()) {
            let mut l = lines.swap_remove(li);
            let mut hl = dot(&h, &l);
            if hl.is_negative() {
                l.iter_mut().for_each(|x| *x = -x.clone());
                hl = -hl;
            }
            let project = |v: &mut Vec<Rat>| {
                let hv = dot(&h, v);
                if !hv.is_zero() {
                    let f = hv / &hl;
                    for (x, y) in v.iter_mut().zip(&l) {
                        *x -= &f * y;
                    }
                }
            };
            for other in lines.iter_mut() {
                project(other);
            }
            for r in rays.iter_mut() {
                project(r);
                *r = normalize(std::mem::take(r));
            }
            if !is_eq {
                rays.push(normalize(l));
            }
        } else {
            let values: Vec<Rat> = rays.iter().map(|r| dot(&h, r)).collect();
            let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
            let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
            let target_rank = rank(&processed, n).saturating_sub(2);
            let tight: Vec<Vec<bool>> = rays
                .iter()
                .map(|r| processed.iter().map(|row| dot(row, r).is_zero()).collect())
                .collect();
            let mut next: Vec<Vec<Rat>> = Vec::new();
            for i in 0..rays.len() {
                if values[i].is_zero() || (!is_eq && values[i].is_positive()) {
                    next.push(rays[i].clone());
                }
            }
            for &pi in &pos {
                for &ni in &neg {
                    let common: Vec<Vec<Rat>> = processed
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| tight[pi][*k] && tight[ni][*k])
                        .map(|(_, row)| row.clone())
                        .collect();
                    if rank(&common, n) != target_rank {
                        continue;
                    }
                    let (a, b) = (&values[pi], &values[ni]);
                    let combo: Vec<Rat> = rays[ni].iter().zip(&rays[pi]).map(|(x, y)| a * x - b * y).collect();
                    next.push(normalize(combo));
                }
            }
            rays = next;
        }
        processed.push(h);
    }

    let dim = p.ambient_dim;
    let mut out = Generators::default();
    for r in rays {
        let t = r[dim].clone();
        let x: Vec<Rat> = r[..dim].to_vec();
        if t.is_zero() {
            out.rays.push(RatVector(x));
        } else {
            out.vertices.push(RatVector(x.into_iter().map(|c| c / &t).collect()));
        }
    }
    out.lines = lines
        .into_iter()
        .map(|l| RatVector(normalize(l[..dim].to_vec())))
        .collect();
    out.vertices.sort_by(|a, b| a.0.cmp(&b.0));
    out.rays.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
