use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropmoduli::family::propagate_indices;
use tropmoduli::linalg::{nullspace, rank, smith_normal_form, IntMatrix, IntVector, LinearSystem, Rat, RatVector};
use tropmoduli::moduli::{
    automorphisms, canonical_form, classify, contract_any, dim_stratum, enumerate_types, is_isomorphic,
    resolve_4valent, stratum, wall_graph, EnumerationSpec, WallGraph, WallKind,
};
use tropmoduli::polyhedral::{
    build_skeleton, harmonicity_at, validate_complex, AffineMap, Face, FaceInclusion, Harmonicity, PairStratum, PiaMap,
    PolyhedralComplex, Polyhedron, SemistablePairData,
};
use tropmoduli::tropcurve::{
    check_balanced, genus, is_stable, realize, stabilize, type_of, CombinatorialType, Edge, Vertex, WeightedGraph,
};

fn q(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    IntMatrix::new(rows, cols, entries.iter().map(|&x| BigInt::from(x)).collect())
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1..=4usize, 1..=4usize).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-6i64..=6, r * c)))
}

fn degree(rows: &[&[i64]]) -> Vec<IntVector> {
    rows.iter().map(|r| IntVector(r.to_vec())).collect()
}

/// Plane types of degree three with contracted legs, genus zero and one.
fn pool() -> &'static Vec<CombinatorialType> {
    static POOL: OnceLock<Vec<CombinatorialType>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::new();
        for (genus, contracted, max_edges) in [(0, 2, 2), (1, 1, 4)] {
            let spec = EnumerationSpec {
                genus,
                contracted,
                degree: degree(&[&[1, 0], &[0, 1], &[-1, -1]]),
                max_edges,
            };
            out.extend(enumerate_types(&spec).unwrap());
        }
        out
    })
}

fn walls() -> &'static Vec<CombinatorialType> {
    static WALLS: OnceLock<Vec<CombinatorialType>> = OnceLock::new();
    WALLS.get_or_init(|| {
        pool()
            .iter()
            .filter(|t| classify(t).kind == WallKind::WeightlessAlmost3Valent)
            .cloned()
            .collect()
    })
}

fn graph() -> &'static WallGraph {
    static GRAPH: OnceLock<WallGraph> = OnceLock::new();
    GRAPH.get_or_init(|| {
        let spec = EnumerationSpec {
            genus: 1,
            contracted: 0,
            degree: degree(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]),
            max_edges: 4,
        };
        let nodes: Vec<_> = enumerate_types(&spec)
            .unwrap()
            .into_iter()
            .filter(|t| classify(t).kind == WallKind::Weightless3Valent)
            .collect();
        wall_graph(&nodes).unwrap()
    })
}

/// Relabels vertices by `perm`, reorders edges by `order` and flips the
/// edges whose bit is set.
fn relabel(t: &CombinatorialType, perm: &[usize], order: &[usize], flips: u32) -> CombinatorialType {
    let g = &t.graph;
    let mut vertices = vec![
        Vertex {
            id: String::new(),
            weight: 0
        };
        g.vertices.len()
    ];
    for (v, &p) in perm.iter().enumerate() {
        vertices[p] = g.vertices[v].clone();
    }
    let mut edges = Vec::new();
    let mut slopes = Vec::new();
    for (k, &e) in order.iter().enumerate() {
        let edge = &g.edges[e];
        let (mut u, mut v, mut s) = (perm[edge.u], perm[edge.v], t.edge_slopes[e].clone());
        if flips >> k & 1 == 1 {
            std::mem::swap(&mut u, &mut v);
            s = -&s;
        }
        edges.push(Edge {
            id: edge.id.clone(),
            u,
            v,
        });
        slopes.push(s);
    }
    let mut legs = g.legs.clone();
    for l in legs.iter_mut() {
        l.vertex = perm[l.vertex];
    }
    let graph = WeightedGraph::new(vertices, edges, legs).unwrap();
    CombinatorialType::new(graph, slopes, t.leg_slopes.clone(), t.dim).unwrap()
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    p
}

/// Pair data of a simplex of `k` vertical components times `h` horizontal
/// ones, every face a stratum, the order given in full.
fn simplex_pair(k: usize, h: usize, nu: Rat) -> SemistablePairData {
    let mut cells = Vec::new();
    for vmask in 1u32..(1 << k) {
        for hmask in 0u32..(1 << h) {
            let v: BTreeSet<String> = (0..k)
                .filter(|i| vmask >> i & 1 == 1)
                .map(|i| format!("D{i}"))
                .collect();
            let hs: BTreeSet<String> = (0..h)
                .filter(|i| hmask >> i & 1 == 1)
                .map(|i| format!("H{i}"))
                .collect();
            cells.push((v, hs));
        }
    }
    let name = |(v, h): &(BTreeSet<String>, BTreeSet<String>)| {
        format!(
            "{}/{}",
            v.iter().cloned().collect::<String>(),
            h.iter().cloned().collect::<String>()
        )
    };
    let mut order = Vec::new();
    for s in &cells {
        for t in &cells {
            if s != t && t.0.is_subset(&s.0) && t.1.is_subset(&s.1) {
                order.push((name(s), name(t)));
            }
        }
    }
    SemistablePairData {
        vertical: (0..k).map(|i| format!("D{i}")).collect(),
        horizontal: (0..h).map(|i| format!("H{i}")).collect(),
        strata: cells
            .iter()
            .map(|c| PairStratum {
                id: name(c),
                vertical: c.0.clone(),
                horizontal: c.1.clone(),
                length: (c.0.len() >= 2).then(|| nu.clone()),
            })
            .collect(),
        order,
    }
}

fn ray_star(dirs: &[(i64, i64)]) -> PiaMap {
    let mut faces = vec![Face::new("o", Polyhedron::point())];
    let mut incs = Vec::new();
    let mut maps = vec![AffineMap::constant(0, RatVector::zeros(2))];
    for (i, &(x, y)) in dirs.iter().enumerate() {
        faces.push(Face::new(format!("r{i}"), Polyhedron::orthant(1)));
        incs.push(FaceInclusion {
            sub: 0,
            sup: i + 1,
            embed: AffineMap::constant(0, RatVector::zeros(1)),
        });
        maps.push(AffineMap::new(
            IntMatrix::from_rows(1, &[vec![x], vec![y]]),
            RatVector::zeros(2),
        ));
    }
    PiaMap::new(PolyhedralComplex::new(faces, incs).unwrap(), 2, maps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_factors_the_matrix((r, c, entries) in small_matrix()) {
        let m = matrix(r, c, &entries);
        let f = smith_normal_form(&m);
        prop_assert_eq!(f.u.mul(&m).mul(&f.v), f.s.clone());
        prop_assert!(f.u.det().abs().is_one());
        prop_assert!(f.v.det().abs().is_one());
        for i in 0..r {
            for j in 0..c {
                prop_assert!(i == j || f.s.get(i, j).is_zero());
            }
        }
        let d = f.elementary_divisors();
        prop_assert!(d.iter().all(|x| x.is_positive()));
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert_eq!(f.rank(), rank(&m.to_rat_rows(), c));
    }

    #[test]
    fn nullspace_complements_rank((r, c, entries) in small_matrix()) {
        let rows = matrix(r, c, &entries).to_rat_rows();
        let kernel = nullspace(&rows, c);
        prop_assert_eq!(kernel.len() + rank(&rows, c), c);
        for v in &kernel {
            for row in &rows {
                prop_assert!(v.dot(row).is_zero());
            }
        }
    }

    #[test]
    fn lp_finds_points_of_feasible_systems(
        (n, x0, rows, slack, nonneg) in (1..=4usize).prop_flat_map(|n| (
            Just(n),
            prop::collection::vec(0i64..=5, n),
            prop::collection::vec(prop::collection::vec(-4i64..=4, n), 1..=5),
            prop::collection::vec(0i64..=3, 5),
            any::<bool>(),
        ))
    ) {
        let mut s = LinearSystem::new(n);
        if nonneg {
            (0..n).for_each(|j| s.set_nonneg(j));
        }
        let x0: Vec<Rat> = x0.iter().map(|&x| q(x, 1)).collect();
        let mut cons = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let a: Vec<Rat> = row.iter().map(|&x| q(x, 1)).collect();
            let value: Rat = a.iter().zip(&x0).map(|(p, x)| p * x).sum();
            if i % 2 == 0 {
                s.add_ge(a.clone(), &value - q(slack[i], 1));
                cons.push((a, value - q(slack[i], 1), false));
            } else {
                s.add_eq(a.clone(), value.clone());
                cons.push((a, value, true));
            }
        }
        let x = s.feasible_point();
        prop_assert!(x.is_some());
        let x = x.unwrap();
        for (a, b, eq) in &cons {
            let v: Rat = a.iter().zip(&x).map(|(p, y)| p * y).sum();
            let holds = if *eq { v == *b } else { v >= *b };
            prop_assert!(holds);
        }
        if nonneg {
            prop_assert!(x.iter().all(|y| !y.is_negative()));
        }
    }

    #[test]
    fn simplex_skeletons_are_valid(k in 1..=3usize, h in 0..=1usize, num in 1..=9i64, den in 1..=4i64) {
        prop_assume!((1usize << k) * (1 << h) - (1 << h) <= 12);
        let d = simplex_pair(k, h, q(num, den));
        let sk = build_skeleton(&d).unwrap();
        prop_assert!(validate_complex(&sk).is_valid());
        prop_assert_eq!(sk.dim(), k - 1 + h);
        prop_assert_eq!(sk.maximal_faces().len(), 1);
    }

    #[test]
    fn harmonicity_certificates_verify(dirs in prop::collection::vec((-3i64..=3, -3i64..=3), 1..=5)) {
        let report = harmonicity_at(&ray_star(&dirs), 0).unwrap();
        prop_assert!(report.verify());
        let sum = dirs.iter().fold((0, 0), |s, d| (s.0 + d.0, s.1 + d.1));
        prop_assert_eq!(report.verdict == Harmonicity::Harmonic, sum == (0, 0));
        if report.verdict == Harmonicity::Harmonic {
            prop_assert!(report.certificate.unwrap().iter().all(One::is_one));
        }
    }

    #[test]
    fn sampled_curves_realize(i in 0..10_000usize, seed in any::<u64>()) {
        let t = &pool()[i % pool().len()];
        let s = stratum(t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for x in s.sample_points(&mut rng, 3) {
            let ne = t.graph.edges.len();
            let lengths = x.0[..ne].to_vec();
            let root = RatVector(x.0[ne..ne + t.dim].to_vec());
            let p = realize(t, &lengths, &root).unwrap();
            prop_assert!(p.validate().is_valid());
            prop_assert_eq!(type_of(&p), t.clone());
            for v in 0..t.graph.vertices.len() {
                prop_assert_eq!(&p.positions[v].0[..], &x.0[s.position_index(v, 0)..s.position_index(v, 0) + t.dim]);
            }
            let st = stabilize(&p).unwrap();
            prop_assert_eq!(genus(&st.ty.graph).unwrap(), genus(&t.graph).unwrap());
            prop_assert!(is_stable(&st.ty.graph));
        }
    }

    #[test]
    fn automorphisms_form_a_group(i in 0..10_000usize) {
        let t = &pool()[i % pool().len()];
        let autos = automorphisms(t);
        let id = tropmoduli::moduli::TypeIso::identity(t);
        prop_assert!(autos.contains(&id));
        for a in &autos {
            prop_assert!(a.is_valid(t, t));
            prop_assert!(autos.contains(&a.inverse()));
            for b in &autos {
                prop_assert!(autos.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn canonical_form_ignores_labels(i in 0..10_000usize, seed in any::<u64>(), flips in any::<u32>()) {
        let t = &pool()[i % pool().len()];
        let perm = permutation(t.graph.vertices.len(), seed);
        let order = permutation(t.graph.edges.len(), seed.rotate_left(17));
        let u = relabel(t, &perm, &order, flips);
        prop_assert!(check_balanced(&u).is_valid());
        prop_assert_eq!(canonical_form(&u), canonical_form(t));
        prop_assert!(is_isomorphic(&u, t));
        prop_assert_eq!(automorphisms(&u).len(), automorphisms(t).len());
    }

    #[test]
    fn resolutions_are_walls_undone(i in 0..10_000usize) {
        let t = &walls()[i % walls().len()];
        let v = classify(t).four_valent_vertex.unwrap();
        let res = resolve_4valent(t, v).unwrap();
        prop_assert!((1..=3).contains(&res.len()));
        let wall_dim = dim_stratum(t).unwrap();
        for r in &res {
            prop_assert!(check_balanced(&r.ty).is_valid());
            prop_assert!(is_stable(&r.ty.graph));
            prop_assert_eq!(classify(&r.ty).kind, WallKind::Weightless3Valent);
            prop_assert!(is_isomorphic(&contract_any(&r.ty, &[r.new_edge]).unwrap(), t));
            if let (Some(a), Some(b)) = (wall_dim, dim_stratum(&r.ty).unwrap()) {
                prop_assert_eq!(b, a + 1);
            }
        }
    }

    #[test]
    fn propagation_is_a_closure(
        small in prop::collection::btree_set(0..64usize, 0..4),
        extra in prop::collection::btree_set(0..64usize, 0..4),
    ) {
        let wg = graph();
        let n = wg.nodes.len();
        let small: BTreeSet<usize> = small.into_iter().map(|x| x % n).collect();
        let mut big = small.clone();
        big.extend(extra.into_iter().map(|x| x % n));
        let cs = propagate_indices(wg, &small);
        let cb = propagate_indices(wg, &big);
        prop_assert!(small.is_subset(&cs.nodes));
        prop_assert!(cs.nodes.is_subset(&cb.nodes));
        prop_assert_eq!(&propagate_indices(wg, &cs.nodes).nodes, &cs.nodes);
        for w in &wg.walls {
            let touched = w.resolutions.iter().any(|r| cs.nodes.contains(r));
            prop_assert!(!touched || w.resolutions.iter().all(|r| cs.nodes.contains(r)));
        }
    }
}

#[test]
fn relabeling_is_exercised() {
    assert!(pool().len() > 100);
    assert!(!walls().is_empty());
    assert!(!graph().walls.is_empty());
}
