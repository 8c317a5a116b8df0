//! Quotients by relations generated from cell pairs, group actions and
//! collapsed subcomplexes.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::complex::{FaceId, Subcomplex, TwoComplex};
use crate::error::{ComplexError, ConstructionError};
use crate::graph::{DartId, DartImage, GraphCell, GraphRelation, Path, VertexId};
use crate::map::{compose_maps, is_isomorphism, ComplexMap, FaceImage};

/// Union-find over faces with a rotation weight: `w(x)` records that
/// position `p` of `x` corresponds to position `p + w(x)` of its parent.
#[derive(Clone, Debug)]
struct FaceUnion {
    parent: Vec<usize>,
    weight: Vec<i64>,
    len: Vec<i64>,
}

impl FaceUnion {
    fn new(x: &TwoComplex) -> Self {
        FaceUnion {
            parent: (0..x.num_faces()).collect(),
            weight: vec![0; x.num_faces()],
            len: x.faces().map(|f| x.face_len(f) as i64).collect(),
        }
    }

    fn find(&mut self, a: usize) -> (usize, i64) {
        let mut path = Vec::new();
        let mut x = a;
        while self.parent[x] != x {
            path.push(x);
            x = self.parent[x];
        }
        let root = x;
        // compress from the top down so each weight is relative to root
        for &y in path.iter().rev() {
            let p = self.parent[y];
            if p != root {
                self.weight[y] = (self.weight[y] + self.weight[p]).rem_euclid(self.len[y]);
            }
            self.parent[y] = root;
        }
        (root, self.weight[a].rem_euclid(self.len[a]) * i64::from(a != root))
    }

    /// Records that position `p` of `b` corresponds to position `p + s` of
    /// `a`. Returns `false` on a conflicting rotation.
    fn union(&mut self, a: usize, b: usize, s: i64) -> Result<bool, String> {
        if self.len[a] != self.len[b] {
            return Err("identified faces have different boundary lengths".to_string());
        }
        let n = self.len[a];
        let (ra, wa) = self.find(a);
        let (rb, wb) = self.find(b);
        if ra == rb {
            return Ok((wb - s - wa).rem_euclid(n) == 0);
        }
        self.parent[rb] = ra;
        self.weight[rb] = (s + wa - wb).rem_euclid(n);
        Ok(true)
    }
}

/// The smallest quotient relation containing a set of generating pairs,
/// extended to faces.
pub(crate) struct ComplexRelation<'a> {
    x: &'a TwoComplex,
    graph: GraphRelation<'a>,
    faces: FaceUnion,
    collapsed: Vec<Option<VertexId>>,
    error: Option<String>,
}

impl<'a> ComplexRelation<'a> {
    pub fn new(x: &'a TwoComplex) -> Self {
        ComplexRelation {
            x,
            graph: GraphRelation::new(x.graph()),
            faces: FaceUnion::new(x),
            collapsed: vec![None; x.num_faces()],
            error: None,
        }
    }

    pub fn relate(&mut self, a: GraphCell, b: GraphCell) {
        self.graph.relate(a, b);
    }

    /// Position `p` of `b` corresponds to position `p + s` of `a`.
    pub fn relate_faces(&mut self, a: FaceId, b: FaceId, s: i64) {
        let x = self.x;
        for (a, b, s) in [(a, b, s), (x.inv_face(a), x.inv_face(b), -s)] {
            match self.faces.union(a.0, b.0, s) {
                Ok(true) => {}
                Ok(false) => {
                    self.error
                        .get_or_insert(format!("face `{}` is identified with a rotation of itself", x.face_name(a)));
                }
                Err(e) => {
                    self.error.get_or_insert(e);
                }
            }
        }
    }

    /// Collapses a face (and its inverse) into the class of vertex `v`.
    pub fn collapse_face(&mut self, f: FaceId, v: VertexId) {
        self.collapsed[f.0] = Some(v);
        self.collapsed[self.x.inv_face(f).0] = Some(v);
    }

    pub fn finish(mut self) -> Result<(Arc<TwoComplex>, ComplexMap), ConstructionError> {
        if let Some(e) = self.error.take() {
            return Err(ConstructionError::NotQuotientRelation(e));
        }
        let x = self.x;
        let gq = self.graph.finish()?;
        let qd = |d: DartId| gq.dmap[d.0];
        let nf = x.num_faces();
        let roots: Vec<(usize, i64)> = (0..nf).map(|f| self.faces.find(f)).collect();
        // propagate collapse over classes
        let mut class_collapse: HashMap<usize, VertexId> = HashMap::new();
        for (f, root) in roots.iter().enumerate() {
            if let Some(v) = self.collapsed[f] {
                class_collapse.entry(root.0).or_insert(v);
            }
        }
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (f, root) in roots.iter().enumerate() {
            members.entry(root.0).or_default().push(f);
        }
        let mut out = TwoComplex::from_graph(gq.graph.clone());
        // root -> (representative face, quotient face)
        let mut rep: HashMap<usize, (FaceId, FaceId)> = HashMap::new();
        let mut order: Vec<usize> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for f in x.canonical_faces() {
            let (r, ri) = (roots[f.0].0, roots[x.inv_face(f).0].0);
            if class_collapse.contains_key(&r) || seen.contains(&r) {
                continue;
            }
            if r == ri {
                return Err(ConstructionError::NotQuotientRelation(format!(
                    "face `{}` is identified with its inverse",
                    x.face_name(f)
                )));
            }
            seen.insert(r);
            seen.insert(ri);
            order.push(r);
        }
        for r in order {
            let f0 = FaceId(members[&r][0]);
            let ri = roots[x.inv_face(f0).0].0;
            let best = members[&r]
                .iter()
                .chain(members[&ri].iter())
                .map(|&f| FaceId(f))
                .filter(|&f| x.is_canonical(f))
                .min_by(|a, b| x.face_name(*a).cmp(x.face_name(*b)))
                .expect("class pair contains a canonical face");
            let (canon_root, inv_root) = if roots[best.0].0 == r { (r, ri) } else { (ri, r) };
            let boundary: Vec<DartId> = x.boundary(best).iter().filter_map(|&d| qd(d).dart()).collect();
            if boundary.is_empty() {
                return Err(ConstructionError::DegenerateFace(x.face_name(best).to_string()));
            }
            let qf = out.add_face(x.face_name(best), boundary).map_err(ConstructionError::Complex)?;
            rep.insert(canon_root, (best, qf));
            rep.insert(inv_root, (x.inv_face(best), out.inv_face(qf)));
        }
        let mut fmap = Vec::with_capacity(nf);
        for f in x.faces() {
            let (root, w) = roots[f.0];
            let start = gq.vmap[x.graph().src(x.boundary(f)[0]).0];
            if class_collapse.contains_key(&root) {
                fmap.push(FaceImage::Path(Path::empty(start)));
                continue;
            }
            let (rho, qf) = rep[&root];
            let n = x.face_len(f) as i64;
            let shift = (w - roots[rho.0].1).rem_euclid(n) as usize;
            let (bs, br) = (x.boundary(f), x.boundary(rho));
            let n = n as usize;
            if (0..n).any(|p| qd(bs[p]) != qd(br[(p + shift) % n])) {
                return Err(ConstructionError::NotQuotientRelation(format!(
                    "boundaries of `{}` and `{}` disagree in the quotient",
                    x.face_name(f),
                    x.face_name(rho)
                )));
            }
            let p0 = (0..n).find(|&p| qd(bs[p]).dart().is_some()).expect("face not degenerate");
            let target = (p0 + shift) % n;
            let offset = (0..target).filter(|&p| qd(br[p]).dart().is_some()).count();
            fmap.push(FaceImage::Face { face: qf, offset });
        }
        let out = Arc::new(out);
        let q = ComplexMap { source: Arc::new(x.clone()), target: out.clone(), vmap: gq.vmap, dmap: gq.dmap, fmap };
        Ok((out, q))
    }
}

/// Quotient of `x` by the smallest quotient relation containing the given
/// cell pairs and face pairs `(a, b, s)` (position `p` of `b` matches
/// position `p + s` of `a`).
pub fn quotient_by_relation(
    x: &TwoComplex,
    cells: &[(GraphCell, GraphCell)],
    faces: &[(FaceId, FaceId, i64)],
) -> Result<(Arc<TwoComplex>, ComplexMap), ConstructionError> {
    let mut rel = ComplexRelation::new(x);
    for &(a, b) in cells {
        rel.relate(a, b);
    }
    for &(a, b, s) in faces {
        rel.relate_faces(a, b, s);
    }
    rel.finish()
}

/// A finite group of automorphisms of a complex, closed under composition.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub complex: Arc<TwoComplex>,
    pub generators: Vec<ComplexMap>,
    pub elements: Vec<ComplexMap>,
}

impl GroupAction {
    /// Closes the generators under composition. Every generator must be an
    /// automorphism of `complex`.
    pub fn new(complex: Arc<TwoComplex>, generators: Vec<ComplexMap>) -> Result<Self, ConstructionError> {
        for g in &generators {
            if !crate::map::same_complex(&g.source, &complex)
                || !crate::map::same_complex(&g.target, &complex)
                || !is_isomorphism(g)
            {
                return Err(ConstructionError::Complex(ComplexError::InvalidMap(
                    "group element is not an automorphism".to_string(),
                )));
            }
        }
        let id = ComplexMap::identity(complex.clone());
        let mut elements = vec![id];
        let mut i = 0;
        while i < elements.len() {
            for g in &generators {
                let h = compose_maps(g, &elements[i])?;
                if !elements.contains(&h) {
                    elements.push(h);
                }
            }
            i += 1;
        }
        Ok(GroupAction { complex, generators, elements })
    }

    pub fn trivial(complex: Arc<TwoComplex>) -> Self {
        GroupAction { elements: vec![ComplexMap::identity(complex.clone())], generators: Vec::new(), complex }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// No element sends a dart or face to its inverse.
    pub fn check_orientation(&self) -> Result<(), ConstructionError> {
        let x = &self.complex;
        for g in &self.elements {
            for d in x.graph().darts() {
                if g.dart_image(d) == Some(x.graph().inv(d)) {
                    return Err(ConstructionError::NotOrientationPreserving(format!(
                        "dart `{}` is sent to its inverse",
                        x.graph().dart_name(d)
                    )));
                }
            }
            for f in x.faces() {
                if g.face_target(f).map(|(t, _)| t) == Some(x.inv_face(f)) {
                    return Err(ConstructionError::NotOrientationPreserving(format!(
                        "face `{}` is sent to its inverse",
                        x.face_name(f)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The orbit complex `X/G` and the quotient map.
pub fn quotient_by_group_action(action: &GroupAction) -> Result<(Arc<TwoComplex>, ComplexMap), ConstructionError> {
    action.check_orientation()?;
    let x = &*action.complex;
    let mut rel = ComplexRelation::new(x);
    for g in &action.generators {
        for v in x.graph().vertices() {
            rel.relate(GraphCell::Vertex(v), GraphCell::Vertex(g.vertex(v)));
        }
        for d in x.graph().darts() {
            if let DartImage::Dart(e) = g.dart(d) {
                rel.relate(GraphCell::Dart(d), GraphCell::Dart(e));
            }
        }
        for f in x.canonical_faces() {
            let (t, k) = g.face_target(f).expect("automorphisms preserve dimension");
            rel.relate_faces(t, f, k as i64);
        }
    }
    let (out, mut q) = rel.finish()?;
    q.source = action.complex.clone();
    Ok((out, q))
}

/// Collapses each part to its own vertex.
pub fn quotient_by_subcomplexes(
    x: &Arc<TwoComplex>,
    parts: &[Subcomplex],
) -> Result<(Arc<TwoComplex>, ComplexMap), ConstructionError> {
    for (i, p) in parts.iter().enumerate() {
        if !p.is_subcomplex_of(x) {
            return Err(ConstructionError::NotSubcomplex(format!("part {i}")));
        }
        if p.vertices.is_empty() {
            return Err(ConstructionError::NotSubcomplex(format!("part {i} is empty")));
        }
        for q in &parts[..i] {
            if !p.is_disjoint(q) {
                return Err(ConstructionError::NotDisjoint);
            }
        }
    }
    let mut rel = ComplexRelation::new(x);
    for p in parts {
        let v0 = *p.vertices.iter().next().expect("nonempty");
        for &v in &p.vertices {
            rel.relate(GraphCell::Vertex(v0), GraphCell::Vertex(v));
        }
        for &d in &p.darts {
            rel.relate(GraphCell::Vertex(v0), GraphCell::Dart(d));
        }
        for &f in &p.faces {
            rel.collapse_face(f, v0);
        }
    }
    let (out, mut q) = rel.finish()?;
    q.source = x.clone();
    Ok((out, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::map::{are_isomorphic, validate_map};

    #[test]
    fn trivial_action_is_identity() {
        let x = Arc::new(corpus::torus());
        let (q, m) = quotient_by_group_action(&GroupAction::trivial(x.clone())).unwrap();
        assert!(are_isomorphic(&q, &x));
        assert!(validate_map(&m).is_valid());
    }

    #[test]
    fn antipodal_sphere_gives_projective_plane() {
        let action = corpus::sph2_antipodal_action();
        let (q, m) = quotient_by_group_action(&action).unwrap();
        assert_eq!(q.counts(), (1, 1, 1));
        assert_eq!(q.face_len(FaceId(0)), 2);
        assert!(are_isomorphic(&q, &Arc::new(corpus::rp2())));
        assert!(validate_map(&m).is_valid());
    }

    #[test]
    fn rotation_of_square_gives_loop() {
        let action = corpus::cyc_rotation_action(4);
        let (q, _) = quotient_by_group_action(&action).unwrap();
        assert_eq!(q.counts(), (1, 1, 0));
    }

    #[test]
    fn subcomplex_collapses() {
        let x = Arc::new(corpus::torus());
        let part = Subcomplex::from_names(&x, &["v"]).unwrap();
        let (q, _) = quotient_by_subcomplexes(&x, &[part]).unwrap();
        assert!(are_isomorphic(&q, &x));

        let x = Arc::new(corpus::cyc(2));
        let part = Subcomplex::from_names(&x, &["a0"]).unwrap();
        let (q, m) = quotient_by_subcomplexes(&x, &[part]).unwrap();
        assert_eq!(q.counts(), (1, 1, 0));
        assert!(validate_map(&m).is_valid());
    }

    #[test]
    fn overlapping_parts_rejected() {
        let x = Arc::new(corpus::cyc(3));
        let a = Subcomplex::from_names(&x, &["a0"]).unwrap();
        let b = Subcomplex::from_names(&x, &["a1"]).unwrap();
        assert_eq!(quotient_by_subcomplexes(&x, &[a, b]).unwrap_err(), ConstructionError::NotDisjoint);
    }
}
