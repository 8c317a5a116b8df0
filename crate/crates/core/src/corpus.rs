//! Small named complexes and maps used throughout tests, benches and the
//! shipped data files.

use std::sync::Arc;

use crate::complex::TwoComplex;
use crate::constructions::GroupAction;
use crate::graph::{DartImage, Graph, VertexId};
use crate::map::{ComplexMap, FaceImage, MapBuilder};
use crate::permgroup::Permutation;

/// Generator names used for bouquets: `a`, `b`, `c`, ...
pub fn generator_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("g{i}")
    }
}

/// One vertex `v` with loops `a`, `b`, ...
pub fn bouquet(k: usize) -> TwoComplex {
    let mut g = Graph::new();
    let v = g.add_vertex("v").unwrap();
    for i in 0..k {
        g.add_edge(generator_name(i), v, v).unwrap();
    }
    TwoComplex::from_graph(g)
}

/// One vertex with one loop `a`.
pub fn loop1() -> TwoComplex {
    bouquet(1)
}

/// The cycle graph with vertices `v0..` and arcs `a_i: v_i -> v_{i+1}`.
pub fn cyc(n: usize) -> TwoComplex {
    let mut g = Graph::new();
    let vs: Vec<VertexId> = (0..n).map(|i| g.add_vertex(format!("v{i}")).unwrap()).collect();
    for i in 0..n {
        g.add_edge(format!("a{i}"), vs[i], vs[(i + 1) % n]).unwrap();
    }
    TwoComplex::from_graph(g)
}

/// The `n`-fold cyclic cover of [`loop1`].
pub fn cyc_cover(n: usize) -> ComplexMap {
    let x = Arc::new(loop1());
    let y = Arc::new(cyc(n));
    let a = x.graph().dart_by_name("a").unwrap();
    ComplexMap::from_forward(
        y.clone(),
        x,
        vec![VertexId(0); n],
        |_| DartImage::Dart(a),
        |_| unreachable!("graphs have no faces"),
    )
}

/// The projective plane: one loop `e` and one face `s = e e`.
pub fn rp2() -> TwoComplex {
    let mut x = TwoComplex::new();
    let v = x.add_vertex("v").unwrap();
    x.add_edge("e", v, v).unwrap();
    x.add_face_named("s", &["e", "e"]).unwrap();
    x
}

/// The sphere with two vertices, two arcs and two 2-gon faces.
pub fn sph2() -> TwoComplex {
    let mut x = TwoComplex::new();
    let v1 = x.add_vertex("v1").unwrap();
    let v2 = x.add_vertex("v2").unwrap();
    x.add_edge("e1", v1, v2).unwrap();
    x.add_edge("e2", v2, v1).unwrap();
    x.add_face_named("s1", &["e1", "e2"]).unwrap();
    x.add_face_named("s2", &["e1", "e2"]).unwrap();
    x
}

fn sph2_rp2_with(s2_offset: usize) -> ComplexMap {
    let y = Arc::new(sph2());
    let x = Arc::new(rp2());
    let mut b = MapBuilder::new(y, x);
    b.vertex("v1", "v").unwrap().vertex("v2", "v").unwrap();
    b.dart("e1", "e").unwrap().dart("e2", "e").unwrap();
    b.face("s1", "s", 0).unwrap().face("s2", "s", s2_offset).unwrap();
    b.build().unwrap()
}

/// The degree-2 cover of the projective plane by the sphere.
pub fn sph2_rp2() -> ComplexMap {
    sph2_rp2_with(1)
}

/// The same cell map with both faces sent at offset 0: not a covering.
pub fn sph2_rp2_broken() -> ComplexMap {
    sph2_rp2_with(0)
}

/// The torus: one vertex, loops `a`, `b` and face `t = a b a^ b^`.
pub fn torus() -> TwoComplex {
    let mut x = bouquet(2);
    x.add_face_named("t", &["a", "b", "a^", "b^"]).unwrap();
    x
}

/// One loop `a` with a face `a^n`.
pub fn cyclic_presentation(n: usize) -> TwoComplex {
    let mut x = loop1();
    let word = vec!["a"; n];
    x.add_face_named("r", &word).unwrap();
    x
}

/// The antipodal involution of [`sph2`], as a group action.
pub fn sph2_antipodal_action() -> GroupAction {
    let y = Arc::new(sph2());
    let mut b = MapBuilder::new(y.clone(), y.clone());
    b.vertex("v1", "v2").unwrap().vertex("v2", "v1").unwrap();
    b.dart("e1", "e2").unwrap().dart("e2", "e1").unwrap();
    b.face("s1", "s2", 1).unwrap().face("s2", "s1", 1).unwrap();
    GroupAction::new(y, vec![b.build().unwrap()]).unwrap()
}

/// Rotation of [`cyc`] by one step, as a group action of order `n`.
pub fn cyc_rotation_action(n: usize) -> GroupAction {
    let y = Arc::new(cyc(n));
    let r = ComplexMap::from_forward(
        y.clone(),
        y.clone(),
        (0..n).map(|i| VertexId((i + 1) % n)).collect(),
        |d| DartImage::Dart(crate::graph::DartId((d.0 + 2) % (2 * n))),
        |_| unreachable!("graphs have no faces"),
    );
    GroupAction::new(y, vec![r]).unwrap()
}

/// The covering of the bouquet on `perms.len()` loops whose generator `i`
/// sends vertex `u_j` to `u_{perms[i](j)}`.
pub fn permutation_cover(perms: &[Permutation]) -> ComplexMap {
    let n = perms.first().map_or(1, Permutation::degree);
    let x = Arc::new(bouquet(perms.len()));
    let mut g = Graph::new();
    let vs: Vec<VertexId> = (0..n).map(|j| g.add_vertex(format!("u{j}")).unwrap()).collect();
    let mut labels = Vec::new();
    for (i, p) in perms.iter().enumerate() {
        for j in 0..n {
            g.add_edge(format!("{}{j}", generator_name(i)), vs[j], vs[p.apply(j)]).unwrap();
            labels.push(i);
        }
    }
    let y = Arc::new(TwoComplex::from_graph(g));
    ComplexMap::from_forward(
        y,
        x,
        vec![VertexId(0); n],
        |d| DartImage::Dart(crate::graph::DartId(2 * labels[d.0 / 2])),
        |_| unreachable!("graphs have no faces"),
    )
}

/// Data for the typical pullback: a one-vertex base with a hexagonal face,
/// a 3-fold and a 2-fold cover of it.
pub fn pullback_figure() -> (ComplexMap, ComplexMap) {
    (hexagon_cover(3), hexagon_cover(2))
}

/// Base with loop `e` and face `e^6`.
pub fn hexagon_base() -> TwoComplex {
    let mut y = TwoComplex::new();
    let v = y.add_vertex("y").unwrap();
    y.add_edge("e", v, v).unwrap();
    y.add_face_named("h", &["e"; 6]).unwrap();
    y
}

/// The `n`-fold cyclic cover of [`hexagon_base`] (`n` divides 6), with one
/// lifted face starting at each vertex.
pub fn hexagon_cover(n: usize) -> ComplexMap {
    let y = Arc::new(hexagon_base());
    let mut x = cyc(n);
    for i in 0..n {
        let word: Vec<String> = (0..6).map(|k| format!("a{}", (i + k) % n)).collect();
        let refs: Vec<&str> = word.iter().map(String::as_str).collect();
        x.add_face_named(&format!("h{i}"), &refs).unwrap();
    }
    let x = Arc::new(x);
    let e = y.graph().dart_by_name("e").unwrap();
    let h = y.face_by_name("h").unwrap();
    ComplexMap::from_forward(
        x,
        y,
        vec![VertexId(0); n],
        |_| DartImage::Dart(e),
        |_| FaceImage::Face { face: h, offset: 0 },
    )
}

/// Loop `a` at `x` plus an arc `b: x -> y`.
pub fn lollipop() -> TwoComplex {
    let mut g = Graph::new();
    let x = g.add_vertex("x").unwrap();
    let y = g.add_vertex("y").unwrap();
    g.add_edge("a", x, x).unwrap();
    g.add_edge("b", x, y).unwrap();
    TwoComplex::from_graph(g)
}

/// A degree-2 cover of [`lollipop`] whose `a`-arcs form a 2-cycle; darts
/// are suffixed by `tag`.
pub fn lollipop_cover(tag: &str) -> ComplexMap {
    let base = Arc::new(lollipop());
    let mut g = Graph::new();
    let x1 = g.add_vertex(format!("x1{tag}")).unwrap();
    let x2 = g.add_vertex(format!("x2{tag}")).unwrap();
    let y1 = g.add_vertex(format!("y1{tag}")).unwrap();
    let y2 = g.add_vertex(format!("y2{tag}")).unwrap();
    g.add_edge(format!("a1{tag}"), x1, x2).unwrap();
    g.add_edge(format!("a2{tag}"), x2, x1).unwrap();
    g.add_edge(format!("b1{tag}"), x1, y1).unwrap();
    g.add_edge(format!("b2{tag}"), x2, y2).unwrap();
    let y = Arc::new(TwoComplex::from_graph(g));
    let (bx, by) = (VertexId(0), VertexId(1));
    let (a, b) = (crate::graph::DartId(0), crate::graph::DartId(2));
    ComplexMap::from_forward(
        y,
        base,
        vec![bx, bx, by, by],
        |d| DartImage::Dart(if d.0 < 4 { a } else { b }),
        |_| unreachable!("graphs have no faces"),
    )
}

fn named_map(
    y: TwoComplex,
    x: TwoComplex,
    vertices: &[(&str, &str)],
    darts: &[(&str, &str)],
    faces: &[(&str, &str, usize)],
) -> ComplexMap {
    let mut b = MapBuilder::new(Arc::new(y), Arc::new(x));
    for (s, t) in vertices {
        b.vertex(s, t).unwrap();
    }
    for (s, t) in darts {
        b.dart(s, t).unwrap();
    }
    for (s, t, k) in faces {
        b.face(s, t, *k).unwrap();
    }
    b.build().unwrap()
}

fn graph_from(vertices: &[&str], arcs: &[(&str, &str, &str)]) -> TwoComplex {
    let mut g = Graph::new();
    for v in vertices {
        g.add_vertex(*v).unwrap();
    }
    for (a, s, t) in arcs {
        let (s, t) = (g.vertex_by_name(s).unwrap(), g.vertex_by_name(t).unwrap());
        g.add_edge(*a, s, t).unwrap();
    }
    TwoComplex::from_graph(g)
}

/// A connected 3-fold cover of the 2-loop bouquet with monodromy group
/// `S3` acting on three points; its Galois group is trivial.
pub fn irregular_cover() -> ComplexMap {
    permutation_cover(&[
        Permutation::from_cycles(3, &[&[0, 1]]).unwrap(),
        Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
    ])
}

/// A folded rank-2 immersion into the 2-loop bouquet whose self-pullback has
/// only trees off the diagonal.
pub fn malnormal_immersion() -> ComplexMap {
    let y = graph_from(
        &["y0", "y1", "y2"],
        &[("a0", "y0", "y1"), ("b0", "y1", "y0"), ("a1", "y1", "y2"), ("b1", "y2", "y2")],
    );
    named_map(
        y,
        bouquet(2),
        &[("y0", "v"), ("y1", "v"), ("y2", "v")],
        &[("a0", "a"), ("b0", "b"), ("a1", "a"), ("b1", "b")],
        &[],
    )
}

/// The immersion reading `a` and `b a b^`: conjugation by `b` keeps a
/// nontrivial loop, so it is not completely irregular.
pub fn conjugate_closed_immersion() -> ComplexMap {
    let y = graph_from(&["y0", "y1"], &[("a0", "y0", "y0"), ("b0", "y0", "y1"), ("a1", "y1", "y1")]);
    named_map(y, bouquet(2), &[("y0", "v"), ("y1", "v")], &[("a0", "a"), ("b0", "b"), ("a1", "a")], &[])
}

/// The projective plane subdivided: vertices `x0`, `x1`, arcs
/// `p: x0 -> x1`, `q: x1 -> x0` and a square face `p q p q`.
pub fn rp2_subdivided() -> TwoComplex {
    let mut x = graph_from(&["x0", "x1"], &[("p", "x0", "x1"), ("q", "x1", "x0")]);
    x.add_face_named("r", &["p", "q", "p", "q"]).unwrap();
    x
}

/// The sphere double covering [`rp2_subdivided`]; the arc `p` is a spanning
/// tree of the base with two lifts.
pub fn sph2_subdivided_cover() -> ComplexMap {
    let mut y = graph_from(
        &["y0", "y1", "y2", "y3"],
        &[("p0", "y0", "y1"), ("q0", "y1", "y2"), ("p1", "y2", "y3"), ("q1", "y3", "y0")],
    );
    y.add_face_named("r0", &["p0", "q0", "p1", "q1"]).unwrap();
    y.add_face_named("r1", &["p0", "q0", "p1", "q1"]).unwrap();
    named_map(
        y,
        rp2_subdivided(),
        &[("y0", "x0"), ("y1", "x1"), ("y2", "x0"), ("y3", "x1")],
        &[("p0", "p"), ("q0", "q"), ("p1", "p"), ("q1", "q")],
        &[("r0", "r", 0), ("r1", "r", 2)],
    )
}

/// A 2-cycle `a0: v0 -> v1`, `a1: v1 -> v0` with a pendant arc `t: v0 -> w`.
pub fn two_cycle_with_tree() -> TwoComplex {
    graph_from(&["v0", "v1", "w"], &[("a0", "v0", "v1"), ("a1", "v1", "v0"), ("t", "v0", "w")])
}

/// The 4-cycle with two pendant arcs, double covering [`two_cycle_with_tree`].
pub fn cyc4_with_trees_cover() -> ComplexMap {
    let y = graph_from(
        &["y0", "y1", "y2", "y3", "w0", "w2"],
        &[
            ("b0", "y0", "y1"),
            ("b1", "y1", "y2"),
            ("b2", "y2", "y3"),
            ("b3", "y3", "y0"),
            ("t0", "y0", "w0"),
            ("t2", "y2", "w2"),
        ],
    );
    named_map(
        y,
        two_cycle_with_tree(),
        &[("y0", "v0"), ("y1", "v1"), ("y2", "v0"), ("y3", "v1"), ("w0", "w"), ("w2", "w")],
        &[("b0", "a0"), ("b1", "a1"), ("b2", "a0"), ("b3", "a1"), ("t0", "t"), ("t2", "t")],
        &[],
    )
}

/// Two maps of an arc onto the arc `e: a -> b`, one of them reversing it:
/// the identification they induce would glue `e` to its own inverse.
pub fn pushout_obstruction() -> (ComplexMap, ComplexMap) {
    let x = graph_from(&["a", "b"], &[("e", "a", "b")]);
    let y = graph_from(&["y0", "y1"], &[("d", "y0", "y1")]);
    let (x, y) = (Arc::new(x), Arc::new(y));
    let mut f1 = MapBuilder::new(y.clone(), x.clone());
    f1.dart("d", "e").unwrap();
    let mut f2 = MapBuilder::new(y, x);
    f2.dart("d", "e^").unwrap();
    (f1.build().unwrap(), f2.build().unwrap())
}

/// Arcs `a: u -> v` and `b: u -> w` with a common start.
pub fn fold_graph() -> TwoComplex {
    graph_from(&["u", "v", "w"], &[("a", "u", "v"), ("b", "u", "w")])
}

/// The two legs out of a single arc whose shared pushout folds `a` onto `b`
/// in [`fold_graph`].
pub fn fold_legs() -> (ComplexMap, ComplexMap) {
    let x = Arc::new(fold_graph());
    let y = Arc::new(graph_from(&["y0", "y1"], &[("e", "y0", "y1")]));
    let mut f1 = MapBuilder::new(y.clone(), x.clone());
    f1.dart("e", "a").unwrap();
    let mut f2 = MapBuilder::new(y, x);
    f2.dart("e", "b").unwrap();
    (f1.build().unwrap(), f2.build().unwrap())
}

/// A connected double cover of the 2-loop bouquet in which both `a` and `b`
/// lift to 2-cycles. Two copies spliced along their `a`-arcs give a
/// connected 4-fold cover.
pub fn bouquet_double_cover() -> ComplexMap {
    let s = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
    permutation_cover(&[s.clone(), s])
}
