//! Disjoint unions, pushouts (including the coequalizer form used by
//! Stallings folds) and connected components.

use std::sync::Arc;

use crate::complex::{FaceId, Subcomplex, TwoComplex};
use crate::error::{ComplexError, ConstructionError};
use crate::graph::{component_labels, fresh, DartId, DartImage, Graph, GraphCell, VertexId};
use crate::map::{compose_maps, factor_through_quotient, maps_agree, same_complex, ComplexMap, FaceImage};

use super::ComplexRelation;

/// Id offsets of one summand inside a disjoint union.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Offsets {
    pub vertex: usize,
    pub dart: usize,
    pub face: usize,
}

/// Disjoint union of several complexes. Cell ids of summand `i` are shifted
/// by `offsets[i]`; clashing names get primes.
pub(crate) fn disjoint_union_all(parts: &[&TwoComplex]) -> (TwoComplex, Vec<Offsets>) {
    let mut vnames: Vec<String> = Vec::new();
    let mut dnames: Vec<String> = Vec::new();
    let (mut src, mut inv) = (Vec::new(), Vec::new());
    let mut taken_v = std::collections::HashSet::new();
    let mut taken_d = std::collections::HashSet::new();
    let mut taken_f = std::collections::HashSet::new();
    let mut offsets = Vec::new();
    let mut faces: Vec<(String, Vec<DartId>)> = Vec::new();
    for x in parts {
        let g = x.graph();
        let off = Offsets { vertex: vnames.len(), dart: dnames.len(), face: 2 * faces.len() };
        for v in g.vertices() {
            let n = fresh(g.vertex_name(v), |n| taken_v.contains(n));
            taken_v.insert(n.clone());
            vnames.push(n);
        }
        let mut names = vec![String::new(); g.num_darts()];
        for d in g.arcs() {
            let n = fresh(g.dart_name(d), |n| taken_d.contains(n));
            taken_d.insert(n.clone());
            names[g.inv(d).0] = format!("{n}^");
            names[d.0] = n;
        }
        for d in g.darts() {
            dnames.push(std::mem::take(&mut names[d.0]));
            src.push(g.src(d).0 + off.vertex);
            inv.push(g.inv(d).0 + off.dart);
        }
        for f in x.canonical_faces() {
            let n = fresh(x.face_name(f), |n| taken_f.contains(n));
            taken_f.insert(n.clone());
            faces.push((n, x.boundary(f).iter().map(|d| DartId(d.0 + off.dart)).collect()));
        }
        offsets.push(off);
    }
    let graph = Graph::from_raw(vnames, dnames, src, inv);
    (TwoComplex::from_raw(graph, faces), offsets)
}

/// The inclusion of a summand into a disjoint union.
pub(crate) fn inclusion(x: &Arc<TwoComplex>, u: &Arc<TwoComplex>, off: Offsets) -> ComplexMap {
    ComplexMap {
        source: x.clone(),
        target: u.clone(),
        vmap: x.graph().vertices().map(|v| VertexId(v.0 + off.vertex)).collect(),
        dmap: x.graph().darts().map(|d| DartImage::Dart(DartId(d.0 + off.dart))).collect(),
        fmap: x.faces().map(|f| FaceImage::Face { face: FaceId(f.0 + off.face), offset: 0 }).collect(),
    }
}

/// The map out of a disjoint union restricting to `maps[i]` on summand `i`.
pub(crate) fn copair(u: &Arc<TwoComplex>, maps: &[&ComplexMap]) -> ComplexMap {
    ComplexMap {
        source: u.clone(),
        target: maps[0].target.clone(),
        vmap: maps.iter().flat_map(|m| m.vmap.iter().copied()).collect(),
        dmap: maps.iter().flat_map(|m| m.dmap.iter().copied()).collect(),
        fmap: maps.iter().flat_map(|m| m.fmap.iter().cloned()).collect(),
    }
}

/// `X1 ⊔ X2` with its two inclusions.
pub fn disjoint_union(x1: &Arc<TwoComplex>, x2: &Arc<TwoComplex>) -> (Arc<TwoComplex>, ComplexMap, ComplexMap) {
    let (u, offs) = disjoint_union_all(&[x1, x2]);
    let u = Arc::new(u);
    let i1 = inclusion(x1, &u, offs[0]);
    let i2 = inclusion(x2, &u, offs[1]);
    (u, i1, i2)
}

/// How the two targets of a pushout are combined before identifying.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PushoutMode {
    /// The targets are distinct complexes glued along `Y`.
    Disjoint,
    /// Both maps land in the same complex, which is folded onto itself.
    Shared,
}

#[derive(Clone, Debug)]
pub struct Pushout {
    pub mode: PushoutMode,
    pub f1: ComplexMap,
    pub f2: ComplexMap,
    pub complex: Arc<TwoComplex>,
    /// `X1 ⊔ X2`, or the common target in shared mode.
    pub union: Arc<TwoComplex>,
    /// The quotient map from `union` onto `complex`.
    pub quotient: ComplexMap,
    pub t1: ComplexMap,
    pub t2: ComplexMap,
}

/// Union-find on arcs (or face pairs) recording whether two members have
/// matching or opposite orientation.
struct ParityUnion {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnion {
    fn new(n: usize) -> Self {
        ParityUnion { parent: (0..n).collect(), parity: vec![false; n] }
    }

    fn find(&mut self, a: usize) -> (usize, bool) {
        let p = self.parent[a];
        if p == a {
            return (a, false);
        }
        let (r, pp) = self.find(p);
        self.parent[a] = r;
        self.parity[a] ^= pp;
        (r, self.parity[a])
    }

    /// Returns `false` if the constraint contradicts earlier ones.
    fn union(&mut self, a: usize, b: usize, flip: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == flip;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ flip;
        true
    }
}

/// Searches for orientations `O` of the union with `f_i(O_Y) ⊆ O`: every
/// pair of identified darts (or faces) must be consistently oriented.
fn check_orientable(
    u: &TwoComplex,
    pairs_d: &[(DartId, DartId)],
    pairs_f: &[(FaceId, FaceId)],
) -> Result<(), ConstructionError> {
    let g = u.graph();
    let arc = |d: DartId| (d.0.min(g.inv(d).0), !g.is_forward(d));
    let mut arcs = ParityUnion::new(g.num_darts());
    for &(a, b) in pairs_d {
        let ((x, px), (y, py)) = (arc(a), arc(b));
        if !arcs.union(x, y, px ^ py) {
            return Err(ConstructionError::NotQuotientRelation(format!(
                "dart `{}` is identified with its inverse",
                g.dart_name(a)
            )));
        }
    }
    let mut faces = ParityUnion::new(u.num_faces());
    for &(a, b) in pairs_f {
        let (x, y) = (u.canonical(a), u.canonical(b));
        let flip = u.is_canonical(a) ^ u.is_canonical(b);
        if !faces.union(x.0, y.0, flip) {
            return Err(ConstructionError::NotQuotientRelation(format!(
                "face `{}` is identified with its inverse",
                u.face_name(a)
            )));
        }
    }
    Ok(())
}

/// The pushout of `f1: Y -> X1` and `f2: Y -> X2`, with the structural maps
/// `t_i: X_i -> P`.
pub fn pushout(f1: &ComplexMap, f2: &ComplexMap, mode: PushoutMode) -> Result<Pushout, ConstructionError> {
    if !same_complex(&f1.source, &f2.source) {
        return Err(ComplexError::TargetMismatch.into());
    }
    if !f1.is_dimension_preserving() || !f2.is_dimension_preserving() {
        return Err(ComplexError::NotDimensionPreserving.into());
    }
    let (union, i1, i2) = match mode {
        PushoutMode::Disjoint => disjoint_union(&f1.target, &f2.target),
        PushoutMode::Shared => {
            if !same_complex(&f1.target, &f2.target) {
                return Err(ComplexError::TargetMismatch.into());
            }
            let x = f1.target.clone();
            (x.clone(), ComplexMap::identity(x.clone()), ComplexMap::identity(x))
        }
    };
    let g1 = compose_maps(&i1, f1)?;
    let g2 = compose_maps(&i2, f2)?;
    let y = &*f1.source;
    let pairs_d: Vec<(DartId, DartId)> = y
        .graph()
        .darts()
        .map(|d| (g1.dart_image(d).expect("dimension preserving"), g2.dart_image(d).expect("dimension preserving")))
        .collect();
    let pairs_f: Vec<(FaceId, usize, FaceId, usize)> = y
        .canonical_faces()
        .map(|r| {
            let (a, k1) = g1.face_target(r).expect("dimension preserving");
            let (b, k2) = g2.face_target(r).expect("dimension preserving");
            (a, k1, b, k2)
        })
        .collect();
    check_orientable(&union, &pairs_d, &pairs_f.iter().map(|&(a, _, b, _)| (a, b)).collect::<Vec<_>>())?;
    let mut rel = ComplexRelation::new(&union);
    for v in y.graph().vertices() {
        rel.relate(GraphCell::Vertex(g1.vertex(v)), GraphCell::Vertex(g2.vertex(v)));
    }
    for &(a, b) in &pairs_d {
        rel.relate(GraphCell::Dart(a), GraphCell::Dart(b));
    }
    for &(a, k1, b, k2) in &pairs_f {
        rel.relate_faces(a, b, k1 as i64 - k2 as i64);
    }
    let (complex, mut quotient) = rel.finish()?;
    quotient.source = union.clone();
    let t1 = compose_maps(&quotient, &i1)?;
    let t2 = compose_maps(&quotient, &i2)?;
    Ok(Pushout { mode, f1: f1.clone(), f2: f2.clone(), complex, union, quotient, t1, t2 })
}

/// The unique `h: P -> Z` with `h ∘ t_i = t_i'`, given maps `t_i': X_i -> Z`
/// with `t_1' ∘ f_1 = t_2' ∘ f_2`.
pub fn pushout_factorize(po: &Pushout, t1p: &ComplexMap, t2p: &ComplexMap) -> Result<ComplexMap, ConstructionError> {
    if !same_complex(&t1p.source, &po.f1.target)
        || !same_complex(&t2p.source, &po.f2.target)
        || !same_complex(&t1p.target, &t2p.target)
    {
        return Err(ComplexError::TargetMismatch.into());
    }
    let a = compose_maps(t1p, &po.f1)?;
    let b = compose_maps(t2p, &po.f2)?;
    if !maps_agree(&a, &b) {
        return Err(ComplexError::SquareDoesNotCommute("outer square".to_string()).into());
    }
    let u = match po.mode {
        PushoutMode::Shared => {
            if !maps_agree(t1p, t2p) {
                return Err(ComplexError::SquareDoesNotCommute(
                    "the two maps out of the shared target differ".to_string(),
                )
                .into());
            }
            let mut u = t1p.clone();
            u.source = po.union.clone();
            u
        }
        PushoutMode::Disjoint => copair(&po.union, &[t1p, t2p]),
    };
    Ok(factor_through_quotient(&po.quotient, &u)?)
}

/// Folds darts `a` and `b` of `x`, which must share their start vertex:
/// the pushout of two maps out of a single arc.
pub fn stallings_fold(x: &Arc<TwoComplex>, a: DartId, b: DartId) -> Result<Pushout, ConstructionError> {
    let g = x.graph();
    if !g.has_dart(a) || !g.has_dart(b) {
        return Err(ComplexError::UnknownDart(if g.has_dart(a) { b } else { a }).into());
    }
    if g.src(a) != g.src(b) || a == b {
        return Err(ComplexError::InvalidMap("a fold needs two distinct darts with a common start".to_string()).into());
    }
    let mut yg = Graph::new();
    let y0 = yg.add_vertex("y0").expect("fresh graph");
    let y1 = yg.add_vertex("y1").expect("fresh graph");
    yg.add_edge("e", y0, y1).expect("fresh graph");
    let y = Arc::new(TwoComplex::from_graph(yg));
    let leg = |d: DartId| {
        ComplexMap::from_forward(
            y.clone(),
            x.clone(),
            vec![g.src(d), g.dst(d)],
            |_| DartImage::Dart(d),
            |_| unreachable!("a single arc has no faces"),
        )
    };
    pushout(&leg(a), &leg(b), PushoutMode::Shared)
}

/// The connected component of `x` containing `v`, with its inclusion.
pub fn component_of(x: &Arc<TwoComplex>, v: VertexId) -> Result<(Arc<TwoComplex>, ComplexMap), ComplexError> {
    let g = x.graph();
    if !g.has_vertex(v) {
        return Err(ComplexError::UnknownVertex(v));
    }
    let labels = component_labels(g);
    let c = labels[v.0];
    let sub = Subcomplex::generated_by(
        x,
        g.vertices().filter(|u| labels[u.0] == c),
        g.darts().filter(|d| labels[g.src(*d).0] == c),
        x.faces().filter(|f| labels[g.src(x.boundary(*f)[0]).0] == c),
    );
    let (y, vold, dold, fold) = sub.to_complex(x);
    let y = Arc::new(y);
    let m = ComplexMap {
        source: y.clone(),
        target: x.clone(),
        vmap: vold,
        dmap: dold.into_iter().map(DartImage::Dart).collect(),
        fmap: fold.into_iter().map(|f| FaceImage::Face { face: f, offset: 0 }).collect(),
    };
    Ok((y, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::map::{are_isomorphic, validate_map};

    fn point() -> Arc<TwoComplex> {
        let mut x = TwoComplex::new();
        x.add_vertex("p").unwrap();
        Arc::new(x)
    }

    fn point_into(x: &Arc<TwoComplex>, v: &str) -> ComplexMap {
        let y = point();
        let mut b = crate::map::MapBuilder::new(y, x.clone());
        b.vertex("p", v).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn wedge_of_spheres() {
        let (s1, s2) = (Arc::new(corpus::sph2()), Arc::new(corpus::sph2()));
        let f1 = point_into(&s1, "v1");
        let mut f2 = point_into(&s2, "v1");
        f2.source = f1.source.clone();
        let po = pushout(&f1, &f2, PushoutMode::Disjoint).unwrap();
        assert_eq!(po.complex.counts(), (3, 4, 4));
        assert_eq!(po.complex.euler_characteristic(), 3);
        assert!(validate_map(&po.t1).is_valid());
        assert!(validate_map(&po.t2).is_valid());
        let a = compose_maps(&po.t1, &f1).unwrap();
        let b = compose_maps(&po.t2, &f2).unwrap();
        assert!(maps_agree(&a, &b));
    }

    #[test]
    fn wedge_folds_onto_one_sphere() {
        let (s1, s2) = (Arc::new(corpus::sph2()), Arc::new(corpus::sph2()));
        let f1 = point_into(&s1, "v1");
        let mut f2 = point_into(&s2, "v1");
        f2.source = f1.source.clone();
        let po = pushout(&f1, &f2, PushoutMode::Disjoint).unwrap();
        let s = Arc::new(corpus::sph2());
        let mut p1 = ComplexMap::identity(s.clone());
        p1.source = s1.clone();
        let mut p2 = ComplexMap::identity(s.clone());
        p2.source = s2.clone();
        let h = pushout_factorize(&po, &p1, &p2).unwrap();
        assert!(maps_agree(&compose_maps(&h, &po.t1).unwrap(), &p1));
        assert!(validate_map(&h).is_valid());
    }

    #[test]
    fn identity_factorization() {
        let (s1, s2) = (Arc::new(corpus::torus()), Arc::new(corpus::rp2()));
        let f1 = point_into(&s1, "v");
        let mut f2 = point_into(&s2, "v");
        f2.source = f1.source.clone();
        let po = pushout(&f1, &f2, PushoutMode::Disjoint).unwrap();
        let h = pushout_factorize(&po, &po.t1, &po.t2).unwrap();
        assert!(crate::map::is_isomorphism(&h));
        assert!(maps_agree(&h, &ComplexMap::identity(po.complex.clone())));
    }

    #[test]
    fn pushout_that_does_not_exist() {
        let mut g = Graph::new();
        let a = g.add_vertex("a").unwrap();
        let b = g.add_vertex("b").unwrap();
        let e = g.add_edge("e", a, b).unwrap();
        let x = Arc::new(TwoComplex::from_graph(g));
        let mut yg = Graph::new();
        let y0 = yg.add_vertex("y0").unwrap();
        let y1 = yg.add_vertex("y1").unwrap();
        yg.add_edge("d", y0, y1).unwrap();
        let y = Arc::new(TwoComplex::from_graph(yg));
        let f1 = ComplexMap::from_forward(y.clone(), x.clone(), vec![a, b], |_| DartImage::Dart(e), |_| unreachable!());
        let f2 = ComplexMap::from_forward(y, x.clone(), vec![b, a], |_| DartImage::Dart(DartId(1)), |_| unreachable!());
        let err = pushout(&f1, &f2, PushoutMode::Shared).unwrap_err();
        assert!(matches!(err, ConstructionError::NotQuotientRelation(_)));
    }

    #[test]
    fn fold_loses_one_arc() {
        let mut g = Graph::new();
        let u = g.add_vertex("u").unwrap();
        let v = g.add_vertex("v").unwrap();
        let w = g.add_vertex("w").unwrap();
        let a = g.add_edge("a", u, v).unwrap();
        let b = g.add_edge("b", u, w).unwrap();
        let x = Arc::new(TwoComplex::from_graph(g));
        let po = stallings_fold(&x, a, b).unwrap();
        assert_eq!(po.complex.counts(), (2, 1, 0));
        assert!(validate_map(&po.quotient).is_valid());
        let h = pushout_factorize(&po, &po.t1, &po.t2).unwrap();
        assert!(is_iso(&h));
    }

    fn is_iso(m: &ComplexMap) -> bool {
        crate::map::is_isomorphism(m)
    }

    #[test]
    fn pushout_over_shared_circle_is_connected() {
        let (c2, c3) = (corpus::cyc_cover(2), corpus::cyc_cover(3));
        let mut g = Graph::new();
        let p = g.add_vertex("p").unwrap();
        let _ = p;
        let y = Arc::new(TwoComplex::from_graph(g));
        let f1 = ComplexMap::from_forward(
            y.clone(),
            c2.source.clone(),
            vec![VertexId(0)],
            |_| unreachable!(),
            |_| unreachable!(),
        );
        let f2 =
            ComplexMap::from_forward(y, c3.source.clone(), vec![VertexId(0)], |_| unreachable!(), |_| unreachable!());
        let po = pushout(&f1, &f2, PushoutMode::Disjoint).unwrap();
        assert!(crate::graph::is_connected(po.complex.graph()));
        assert_eq!(po.complex.counts(), (4, 5, 0));
    }

    #[test]
    fn component_extraction() {
        let (u, _, _) = disjoint_union(&Arc::new(corpus::torus()), &Arc::new(corpus::cyc(3)));
        let (c, inc) = component_of(&u, VertexId(1)).unwrap();
        assert!(are_isomorphic(&c, &Arc::new(corpus::cyc(3))));
        assert!(validate_map(&inc).is_valid());
    }
}
