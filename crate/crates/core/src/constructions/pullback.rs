//! Fibre products of dimension-preserving maps.

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::{FaceId, TwoComplex};
use crate::error::{ComplexError, ConstructionError};
use crate::graph::{mangle, DartId, DartImage, Graph, VertexId};
use crate::map::{compose_maps, maps_agree, same_complex, ComplexMap, FaceImage};

#[derive(Clone, Debug)]
pub struct Pullback {
    pub f1: ComplexMap,
    pub f2: ComplexMap,
    pub complex: Arc<TwoComplex>,
    /// Projection onto `X1`.
    pub t1: ComplexMap,
    /// Projection onto `X2`.
    pub t2: ComplexMap,
    vertex_index: HashMap<(VertexId, VertexId), VertexId>,
    dart_index: HashMap<(DartId, DartId), DartId>,
    face_index: HashMap<(FaceId, FaceId), FaceId>,
}

impl Pullback {
    /// The vertex `v1 × v2`, if it exists.
    pub fn vertex(&self, v1: VertexId, v2: VertexId) -> Option<VertexId> {
        self.vertex_index.get(&(v1, v2)).copied()
    }

    pub fn dart(&self, d1: DartId, d2: DartId) -> Option<DartId> {
        self.dart_index.get(&(d1, d2)).copied()
    }

    pub fn face(&self, s1: FaceId, s2: FaceId) -> Option<FaceId> {
        self.face_index.get(&(s1, s2)).copied()
    }
}

fn pair_name(a: &str, b: &str) -> String {
    format!("{}*{}", mangle(a), mangle(b))
}

/// The pullback of `f1: X1 -> Y` and `f2: X2 -> Y`. Its cells are the pairs
/// of cells with a common image; it may be disconnected.
pub fn pullback(f1: &ComplexMap, f2: &ComplexMap) -> Result<Pullback, ConstructionError> {
    if !same_complex(&f1.target, &f2.target) {
        return Err(ComplexError::TargetMismatch.into());
    }
    if !f1.is_dimension_preserving() || !f2.is_dimension_preserving() {
        return Err(ComplexError::NotDimensionPreserving.into());
    }
    let (x1, x2) = (&*f1.source, &*f2.source);
    let (g1, g2) = (x1.graph(), x2.graph());
    let mut g = Graph::new();
    let mut vertex_index = HashMap::new();
    let mut vpairs = Vec::new();
    for v1 in g1.vertices() {
        for v2 in g2.vertices() {
            if f1.vertex(v1) == f2.vertex(v2) {
                let id =
                    g.add_vertex(pair_name(g1.vertex_name(v1), g2.vertex_name(v2))).expect("pair names are distinct");
                vertex_index.insert((v1, v2), id);
                vpairs.push((v1, v2));
            }
        }
    }
    let mut dart_index = HashMap::new();
    let mut dpairs = vec![];
    for d1 in g1.arcs() {
        for d2 in g2.darts() {
            if f1.dart(d1) == f2.dart(d2) {
                let s = vertex_index[&(g1.src(d1), g2.src(d2))];
                let t = vertex_index[&(g1.dst(d1), g2.dst(d2))];
                let id =
                    g.add_edge(pair_name(g1.dart_name(d1), g2.dart_name(d2)), s, t).expect("pair names are distinct");
                dart_index.insert((d1, d2), id);
                dart_index.insert((g1.inv(d1), g2.inv(d2)), g.inv(id));
                dpairs.push((d1, d2));
                dpairs.push((g1.inv(d1), g2.inv(d2)));
            }
        }
    }
    let mut q = TwoComplex::from_graph(g);
    let mut face_index = HashMap::new();
    // (first factor offset, second factor offset) per product face
    let mut foffs: Vec<(FaceId, usize, FaceId, usize)> = Vec::new();
    for s1 in x1.canonical_faces() {
        let (t, k1) = f1.face_target(s1).expect("dimension preserving");
        for s2 in x2.faces() {
            let (t2, k2) = f2.face_target(s2).expect("dimension preserving");
            if t2 != t {
                continue;
            }
            let n = x1.face_len(s1);
            let (b1, b2) = (x1.boundary(s1), x2.boundary(s2));
            let boundary: Vec<DartId> =
                (0..n).map(|i| dart_index[&(b1[(i + n - k1) % n], b2[(i + n - k2) % n])]).collect();
            let id = q
                .add_face(pair_name(x1.face_name(s1), x2.face_name(s2)), boundary)
                .map_err(ConstructionError::Complex)?;
            face_index.insert((s1, s2), id);
            face_index.insert((x1.inv_face(s1), x2.inv_face(s2)), q.inv_face(id));
            foffs.push((s1, (n - k1) % n, s2, (n - k2) % n));
        }
    }
    let q = Arc::new(q);
    let proj = |src: &Arc<TwoComplex>, first: bool| {
        ComplexMap::from_forward(
            q.clone(),
            src.clone(),
            vpairs.iter().map(|p| if first { p.0 } else { p.1 }).collect(),
            |d| {
                let p = dpairs[d.0];
                DartImage::Dart(if first { p.0 } else { p.1 })
            },
            |f| {
                let (s1, o1, s2, o2) = foffs[f.0 / 2];
                if first {
                    FaceImage::Face { face: s1, offset: o1 }
                } else {
                    FaceImage::Face { face: s2, offset: o2 }
                }
            },
        )
    };
    let t1 = proj(&f1.source, true);
    let t2 = proj(&f2.source, false);
    Ok(Pullback { f1: f1.clone(), f2: f2.clone(), complex: q, t1, t2, vertex_index, dart_index, face_index })
}

/// The unique `h: Z -> Q` with `t_i ∘ h = t_i'`, given dimension-preserving
/// `t_i': Z -> X_i` with `f_1 ∘ t_1' = f_2 ∘ t_2'`.
pub fn pullback_factorize(pb: &Pullback, t1p: &ComplexMap, t2p: &ComplexMap) -> Result<ComplexMap, ConstructionError> {
    if !same_complex(&t1p.source, &t2p.source)
        || !same_complex(&t1p.target, &pb.f1.source)
        || !same_complex(&t2p.target, &pb.f2.source)
    {
        return Err(ComplexError::TargetMismatch.into());
    }
    if !t1p.is_dimension_preserving() || !t2p.is_dimension_preserving() {
        return Err(ComplexError::NotDimensionPreserving.into());
    }
    let a = compose_maps(&pb.f1, t1p)?;
    let b = compose_maps(&pb.f2, t2p)?;
    if !maps_agree(&a, &b) {
        return Err(ComplexError::SquareDoesNotCommute("outer square".to_string()).into());
    }
    let z = t1p.source.clone();
    let zg = z.graph();
    let vmap = zg.vertices().map(|v| pb.vertex_index[&(t1p.vertex(v), t2p.vertex(v))]).collect();
    let dmap = zg
        .darts()
        .map(|d| {
            let key = (t1p.dart_image(d).expect("checked"), t2p.dart_image(d).expect("checked"));
            DartImage::Dart(pb.dart_index[&key])
        })
        .collect();
    let q = &pb.complex;
    let fmap = z
        .faces()
        .map(|f| {
            let (s1, k1) = t1p.face_target(f).expect("checked");
            let (s2, _) = t2p.face_target(f).expect("checked");
            let pf = pb.face_index[&(s1, s2)];
            let (_, o1) = pb.t1.face_target(pf).expect("projections preserve dimension");
            let n = q.face_len(pf);
            FaceImage::Face { face: pf, offset: (k1 + n - o1) % n }
        })
        .collect();
    let h = ComplexMap { source: z, target: q.clone(), vmap, dmap, fmap };
    if !maps_agree(&compose_maps(&pb.t1, &h)?, t1p) || !maps_agree(&compose_maps(&pb.t2, &h)?, t2p) {
        return Err(ComplexError::SquareDoesNotCommute("induced map".to_string()).into());
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::component_of;
    use crate::corpus;
    use crate::graph::is_connected;
    use crate::map::{are_isomorphic, validate_map};

    #[test]
    fn six_faces() {
        let (f1, f2) = corpus::pullback_figure();
        let pb = pullback(&f1, &f2).unwrap();
        assert_eq!(pb.complex.counts(), (6, 6, 6));
        assert!(crate::complex::validate_complex(&pb.complex).is_valid());
        assert!(validate_map(&pb.t1).is_valid());
        assert!(validate_map(&pb.t2).is_valid());
        let a = compose_maps(&f1, &pb.t1).unwrap();
        let b = compose_maps(&f2, &pb.t2).unwrap();
        assert!(maps_agree(&a, &b));
    }

    #[test]
    fn identity_pullback_has_diagonal() {
        let x = Arc::new(corpus::torus());
        let id = ComplexMap::identity(x.clone());
        let pb = pullback(&id, &id).unwrap();
        assert!(are_isomorphic(&pb.complex, &x));
        let h = pullback_factorize(&pb, &id, &id).unwrap();
        assert!(crate::map::is_isomorphism(&h));
    }

    #[test]
    fn cyclic_covers_multiply() {
        let pb = pullback(&corpus::cyc_cover(2), &corpus::cyc_cover(3)).unwrap();
        assert!(is_connected(pb.complex.graph()));
        assert!(are_isomorphic(&pb.complex, &Arc::new(corpus::cyc(6))));
    }

    #[test]
    fn factorization_from_cyc6() {
        let (c2, c3, c6) = (corpus::cyc_cover(2), corpus::cyc_cover(3), corpus::cyc_cover(6));
        let pb = pullback(&c2, &c3).unwrap();
        let z = c6.source.clone();
        let down = |n: usize, target: &Arc<TwoComplex>| {
            ComplexMap::from_forward(
                z.clone(),
                target.clone(),
                (0..6).map(|i| VertexId(i % n)).collect(),
                |d| DartImage::Dart(DartId(2 * ((d.0 / 2) % n))),
                |_| unreachable!(),
            )
        };
        let h = pullback_factorize(&pb, &down(2, &c2.source), &down(3, &c3.source)).unwrap();
        assert!(crate::map::is_isomorphism(&h));
    }

    #[test]
    fn disconnected_pullback_and_component() {
        let c2 = corpus::cyc_cover(2);
        let pb = pullback(&c2, &c2).unwrap();
        assert!(!is_connected(pb.complex.graph()));
        let (c, _) = component_of(&pb.complex, VertexId(0)).unwrap();
        assert!(are_isomorphic(&c, &c2.source));
    }
}
