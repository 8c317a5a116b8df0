//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;
use std::sync::Arc;

use covers::complex::TwoComplex;
use covers::corpus;
use covers::covering::{check_covering, CoveringCert};
use covers::galois::inverse_galois;
use covers::graph::{is_connected, DartId, DartImage, Graph, Path, VertexId};
use covers::map::{ComplexMap, FaceImage};
use covers::permgroup::Permutation;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
    Permutation::from_cycles(n, cycles).unwrap()
}

pub fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

/// A random spanning tree on `nv` vertices plus `extra` random arcs, loops
/// allowed.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, nv: usize, extra: usize) -> Graph {
    let mut g = Graph::new();
    let vs: Vec<VertexId> = (0..nv).map(|i| g.add_vertex(format!("x{i}")).unwrap()).collect();
    for i in 1..nv {
        let j = rng.gen_range(0..i);
        let (s, t) = if rng.gen_bool(0.5) { (vs[i], vs[j]) } else { (vs[j], vs[i]) };
        g.add_edge(format!("t{}", i - 1), s, t).unwrap();
    }
    for i in 0..extra {
        let (s, t) = (vs[rng.gen_range(0..nv)], vs[rng.gen_range(0..nv)]);
        g.add_edge(format!("e{i}"), s, t).unwrap();
    }
    g
}

/// The graph cover of `x` in which arc `a` lifts to arcs `(a, i)` from
/// `(src a, i)` to `(dst a, perms[a](i))`.
pub fn graph_cover(x: &Arc<TwoComplex>, perms: &[Permutation]) -> ComplexMap {
    let g = x.graph();
    assert!(x.is_graph());
    let n = perms.first().map_or(1, Permutation::degree);
    let mut y = Graph::new();
    for i in 0..n {
        for v in g.vertices() {
            y.add_vertex(format!("{}.{i}", g.vertex_name(v))).unwrap();
        }
    }
    let nv = g.num_vertices();
    let mut below = Vec::new();
    for (k, a) in g.arcs().enumerate() {
        for i in 0..n {
            let s = VertexId(i * nv + g.src(a).0);
            let t = VertexId(perms[k].apply(i) * nv + g.dst(a).0);
            y.add_edge(format!("{}.{i}", g.dart_name(a)), s, t).unwrap();
            below.push(a);
        }
    }
    let vmap = (0..n * nv).map(|k| VertexId(k % nv)).collect();
    ComplexMap::from_forward(
        Arc::new(TwoComplex::from_graph(y)),
        x.clone(),
        vmap,
        |d: DartId| DartImage::Dart(below[d.0 / 2]),
        |_| unreachable!("graphs have no faces"),
    )
}

/// A connected graph cover of degree at most `max_degree`, by rejection.
pub fn random_connected_cover(rng: &mut ChaCha8Rng, x: &Arc<TwoComplex>, max_degree: usize) -> ComplexMap {
    loop {
        let n = rng.gen_range(1..=max_degree);
        let perms: Vec<Permutation> = (0..x.num_arcs()).map(|_| random_perm(rng, n)).collect();
        let f = graph_cover(x, &perms);
        if is_connected(f.source.graph()) {
            return f;
        }
    }
}

/// A random base graph and a connected cover of it.
pub fn random_graph_cover(rng: &mut ChaCha8Rng) -> ComplexMap {
    let nv = rng.gen_range(1..=4);
    let extra = rng.gen_range(1..=3);
    let x = Arc::new(TwoComplex::from_graph(random_connected_graph(rng, nv, extra)));
    random_connected_cover(rng, &x, 4)
}

/// A random walk of the given length.
pub fn random_path(rng: &mut ChaCha8Rng, g: &Graph, start: VertexId, len: usize) -> Path {
    let mut v = start;
    let mut darts = Vec::new();
    for _ in 0..len {
        let out = g.darts_from(v);
        let Some(&d) = out.choose(rng) else { break };
        darts.push(d);
        v = g.dst(d);
    }
    Path::new(start, darts)
}

/// Lifts a path by scanning the darts at each vertex; panics unless exactly
/// one dart over each base dart leaves the current vertex.
pub fn lift_by_search(f: &ComplexMap, p: &Path, u: VertexId) -> Path {
    let g = f.source.graph();
    let mut v = u;
    let mut darts = Vec::new();
    for &d in &p.darts {
        let over: Vec<DartId> = g.darts().filter(|&e| g.src(e) == v && f.dart(e) == DartImage::Dart(d)).collect();
        assert_eq!(over.len(), 1, "lift of a dart is not unique");
        darts.push(over[0]);
        v = g.dst(over[0]);
    }
    Path::new(u, darts)
}

/// Points of the square lattice within graph distance `r` of the origin,
/// counted by breadth-first search.
pub fn lattice_ball(r: i64) -> usize {
    let mut seen = std::collections::HashSet::from([(0i64, 0i64)]);
    let mut queue = VecDeque::from([((0i64, 0i64), 0i64)]);
    while let Some(((x, y), d)) = queue.pop_front() {
        if d == r {
            continue;
        }
        for n in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
            if seen.insert(n) {
                queue.push_back((n, d + 1));
            }
        }
    }
    seen.len()
}

/// Every covering shipped in the corpus.
pub fn corpus_covers() -> Vec<(String, ComplexMap)> {
    let mut out = vec![
        ("sph2_rp2".to_string(), corpus::sph2_rp2()),
        ("hexagon_3".to_string(), corpus::hexagon_cover(3)),
        ("hexagon_2".to_string(), corpus::hexagon_cover(2)),
        ("irregular".to_string(), corpus::irregular_cover()),
        ("sph2_subdivided".to_string(), corpus::sph2_subdivided_cover()),
        ("cyc4_with_trees".to_string(), corpus::cyc4_with_trees_cover()),
        ("bouquet_double".to_string(), corpus::bouquet_double_cover()),
    ];
    for n in 1..=6 {
        out.push((format!("cyc{n}"), corpus::cyc_cover(n)));
    }
    for (name, c) in galois_corpus() {
        out.push((format!("galois_{name}"), c.map().clone()));
    }
    out
}

/// Galois covers with groups of order up to 12.
pub fn galois_corpus() -> Vec<(String, CoveringCert)> {
    let gens: Vec<(&str, Vec<Permutation>)> = vec![
        ("z3", vec![perm(3, &[&[0, 1, 2]])]),
        ("z2xz2", vec![perm(4, &[&[0, 1], &[2, 3]]), perm(4, &[&[0, 2], &[1, 3]])]),
        ("s3", vec![perm(3, &[&[0, 1]]), perm(3, &[&[0, 1, 2]])]),
        ("d4", vec![perm(4, &[&[0, 1, 2, 3]]), perm(4, &[&[1, 3]])]),
        ("a4", vec![perm(4, &[&[0, 1, 2]]), perm(4, &[&[0, 1], &[2, 3]])]),
        ("d6", vec![perm(6, &[&[0, 1, 2, 3, 4, 5]]), perm(6, &[&[1, 5], &[2, 4]])]),
    ];
    let mut out = vec![
        ("sph2_rp2".to_string(), check_covering(&corpus::sph2_rp2()).unwrap()),
        ("cyc4".to_string(), check_covering(&corpus::cyc_cover(4)).unwrap()),
        ("cyc6".to_string(), check_covering(&corpus::cyc_cover(6)).unwrap()),
        ("sph2_subdivided".to_string(), check_covering(&corpus::sph2_subdivided_cover()).unwrap()),
    ];
    for (name, g) in gens {
        out.push((name.to_string(), inverse_galois(&g).unwrap().0));
    }
    out
}

/// A random relabelling of `y`: an isomorphic copy with shuffled vertex and
/// arc order, and the map back onto `y`.
pub fn shuffled_copy(rng: &mut ChaCha8Rng, y: &Arc<TwoComplex>) -> ComplexMap {
    let g = y.graph();
    let mut vorder: Vec<VertexId> = g.vertices().collect();
    vorder.shuffle(rng);
    let mut aorder: Vec<DartId> = g.arcs().collect();
    aorder.shuffle(rng);
    let mut h = Graph::new();
    let mut new_of = vec![VertexId(0); g.num_vertices()];
    for (k, &v) in vorder.iter().enumerate() {
        new_of[v.0] = h.add_vertex(format!("c{k}")).unwrap();
    }
    let mut dart_back = Vec::new();
    for (k, &a) in aorder.iter().enumerate() {
        // flip some arcs
        let a = if rng.gen_bool(0.5) { g.inv(a) } else { a };
        h.add_edge(format!("c{k}"), new_of[g.src(a).0], new_of[g.dst(a).0]).unwrap();
        dart_back.push(a);
    }
    let mut x = TwoComplex::from_graph(h);
    let mut dart_new = vec![DartId(0); g.num_darts()];
    for (k, &a) in dart_back.iter().enumerate() {
        dart_new[a.0] = DartId(2 * k);
        dart_new[g.inv(a).0] = DartId(2 * k + 1);
    }
    let mut face_back = Vec::new();
    for (k, f) in y.canonical_faces().enumerate() {
        let b: Vec<DartId> = y.boundary(f).iter().map(|d| dart_new[d.0]).collect();
        x.add_face(format!("c{k}"), b).unwrap();
        face_back.push(f);
    }
    let mut vmap = vec![VertexId(0); g.num_vertices()];
    for (old, new) in new_of.iter().enumerate() {
        vmap[new.0] = VertexId(old);
    }
    ComplexMap::from_forward(
        Arc::new(x),
        y.clone(),
        vmap,
        |d| DartImage::Dart(dart_back[d.0 / 2]),
        |f| FaceImage::Face { face: face_back[f.0 / 2], offset: 0 },
    )
}
