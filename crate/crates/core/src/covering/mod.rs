//! Coverings: certification, lifting, excision, monodromy, coset
//! enumeration and covers built from subgroups.

mod bottom_up;
mod excise;
mod monodromy;
mod presentation;

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::{FaceId, TwoComplex};
use crate::error::{ComplexError, CoveringAxiom, CoveringError, CoveringFailure};
use crate::graph::{is_connected, spanning_tree, DartId, DartImage, Path, VertexId};
use crate::map::{compose_maps, faces_into, local_continuity_with, maps_agree, validate_map, ComplexMap, FaceImage};

pub use bottom_up::{bottom_up_cover, universal_cover, Truncation, UniversalBounds, UniversalCover};
pub use excise::{excise, is_simply_connected, Excision};
pub use monodromy::{monodromy, Monodromy};
pub use presentation::{
    coset_enumerate, ComplexPresentation, CosetTable, Letter, Presentation, TableStatus, DEFAULT_MAX_COSETS,
};

/// A map that has passed the covering axioms, with its fibres.
#[derive(Clone, Debug)]
pub struct CoveringCert {
    map: ComplexMap,
    degree: usize,
    vertex_fibers: Vec<Vec<VertexId>>,
    dart_fibers: Vec<Vec<DartId>>,
    face_fibers: Vec<Vec<FaceId>>,
    lifts: HashMap<(VertexId, DartId), DartId>,
}

fn fail(axiom: CoveringAxiom, location: String, injectivity: bool, immersion: bool) -> CoveringError {
    CoveringError::NotCovering(CoveringFailure { axiom, location, injectivity, immersion })
}

/// Checks the covering axioms: the map preserves dimension, and local
/// continuity on darts and on face appearances is bijective at every vertex.
/// The target must be connected.
pub fn check_covering(m: &ComplexMap) -> Result<CoveringCert, CoveringError> {
    let report = validate_map(m);
    if !report.is_valid() {
        return Err(ComplexError::InvalidMap(report.to_string()).into());
    }
    let (x, y) = (&*m.source, &*m.target);
    let (sg, tg) = (x.graph(), y.graph());
    if !m.is_dimension_preserving() {
        let what = sg
            .darts()
            .find(|d| m.dart_image(*d).is_none())
            .map(|d| format!("dart `{}` collapses", sg.dart_name(d)))
            .or_else(|| {
                x.faces()
                    .find(|f| m.face_target(*f).is_none())
                    .map(|f| format!("face `{}` maps to a path", x.face_name(f)))
            })
            .unwrap_or_default();
        return Err(fail(CoveringAxiom::C1, what, false, false));
    }
    if !is_connected(tg) {
        return Err(fail(CoveringAxiom::Fibers, "target is disconnected".to_string(), false, false));
    }
    let into = faces_into(m)?;
    let mut first: Option<CoveringError> = None;
    let mut immersion = true;
    for u in sg.vertices() {
        let lc = local_continuity_with(m, u, &into)?;
        immersion &= lc.is_injective();
        if first.is_some() {
            continue;
        }
        let at = format!("`{}` over `{}`", sg.vertex_name(u), tg.vertex_name(lc.image));
        if !lc.edge_injective || !lc.edge_surjective {
            first = Some(fail(CoveringAxiom::C2, format!("darts at {at}"), !lc.edge_injective, false));
            continue;
        }
        if let Some(fc) = lc.faces.iter().find(|f| !f.injective || !f.surjective) {
            first = Some(fail(
                CoveringAxiom::C3,
                format!("appearances of {at} in face `{}`", y.face_name(fc.target_face)),
                !fc.injective,
                false,
            ));
        }
    }
    if let Some(mut e) = first {
        if let CoveringError::NotCovering(f) = &mut e {
            f.immersion = immersion;
        }
        return Err(e);
    }
    let mut vertex_fibers = vec![Vec::new(); tg.num_vertices()];
    for v in sg.vertices() {
        vertex_fibers[m.vertex(v).0].push(v);
    }
    let mut dart_fibers = vec![Vec::new(); tg.num_darts()];
    let mut lifts = HashMap::new();
    for d in sg.darts() {
        let e = m.dart_image(d).expect("dimension preserving");
        dart_fibers[e.0].push(d);
        lifts.insert((sg.src(d), e), d);
    }
    let mut face_fibers = vec![Vec::new(); y.num_faces()];
    for f in x.faces() {
        face_fibers[m.face_target(f).expect("dimension preserving").0 .0].push(f);
    }
    let degree = vertex_fibers.first().map_or(0, Vec::len);
    let sizes = vertex_fibers
        .iter()
        .map(Vec::len)
        .chain(dart_fibers.iter().map(Vec::len))
        .chain(face_fibers.iter().map(Vec::len));
    if degree == 0 || sizes.into_iter().any(|s| s != degree) {
        return Err(fail(CoveringAxiom::Fibers, "fibers differ in size".to_string(), false, immersion));
    }
    Ok(CoveringCert { map: m.clone(), degree, vertex_fibers, dart_fibers, face_fibers, lifts })
}

impl CoveringCert {
    pub fn map(&self) -> &ComplexMap {
        &self.map
    }

    pub fn source(&self) -> &Arc<TwoComplex> {
        &self.map.source
    }

    pub fn target(&self) -> &Arc<TwoComplex> {
        &self.map.target
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vertex_fiber(&self, v: VertexId) -> &[VertexId] {
        &self.vertex_fibers[v.0]
    }

    pub fn dart_fiber(&self, d: DartId) -> &[DartId] {
        &self.dart_fibers[d.0]
    }

    pub fn face_fiber(&self, f: FaceId) -> &[FaceId] {
        &self.face_fibers[f.0]
    }

    /// Every fibre, of every dimension, has `degree` elements.
    pub fn fibers_equinumerous(&self) -> bool {
        self.vertex_fibers
            .iter()
            .map(Vec::len)
            .chain(self.dart_fibers.iter().map(Vec::len))
            .chain(self.face_fibers.iter().map(Vec::len))
            .all(|s| s == self.degree)
    }

    /// The dart at `u` over `d`.
    pub fn lift_dart(&self, u: VertexId, d: DartId) -> Option<DartId> {
        self.lifts.get(&(u, d)).copied()
    }

    fn check_over(&self, u: VertexId, v: VertexId) -> Result<(), CoveringError> {
        let g = self.source().graph();
        if !g.has_vertex(u) || self.map.vertex(u) != v {
            let name = if g.has_vertex(u) { g.vertex_name(u).to_string() } else { u.to_string() };
            return Err(CoveringError::BasepointNotInFiber(name));
        }
        Ok(())
    }

    /// The unique lift of `p` starting at `u`.
    pub fn lift_path(&self, p: &Path, u: VertexId) -> Result<Path, CoveringError> {
        self.check_over(u, p.start)?;
        if !p.is_valid(self.target().graph()) {
            return Err(ComplexError::InvalidMap("path is not valid in the base".to_string()).into());
        }
        let g = self.source().graph();
        let mut at = u;
        let mut darts = Vec::with_capacity(p.len());
        for &d in &p.darts {
            let l = self.lift_dart(at, d).expect("coverings lift every dart");
            darts.push(l);
            at = g.dst(l);
        }
        Ok(Path::new(u, darts))
    }

    /// The unique face `σ` and appearance `y` of `u` in `σ` lying over
    /// appearance `x` of the face `tau`.
    pub fn lift_face(&self, tau: FaceId, x: usize, u: VertexId) -> Result<(FaceId, usize), CoveringError> {
        let (src, tgt) = (&**self.source(), &**self.target());
        if !tgt.has_face(tau) || x >= tgt.face_len(tau) {
            return Err(ComplexError::UnknownFace(tau).into());
        }
        self.check_over(u, tgt.graph().src(tgt.boundary(tau)[x]))?;
        let n = tgt.face_len(tau);
        for &s in self.face_fiber(tau) {
            let (_, k) = self.map.face_target(s).expect("dimension preserving");
            let y = (x + n - k) % n;
            if src.graph().src(src.boundary(s)[y]) == u {
                return Ok((s, y));
            }
        }
        unreachable!("face local continuity is bijective")
    }

    /// Lifts `g: Z -> X` through the covering to `Z -> Y` sending `x` to
    /// `u`. `Z` must be connected. Fails when the lift of some generator
    /// loop of `Z` is not closed.
    pub fn lift_map(&self, g: &ComplexMap, x: VertexId, u: VertexId) -> Result<ComplexMap, CoveringError> {
        if !crate::map::same_complex(&g.target, self.target()) {
            return Err(ComplexError::TargetMismatch.into());
        }
        let z = g.source.clone();
        let zg = z.graph();
        if !zg.has_vertex(x) {
            return Err(ComplexError::UnknownVertex(x).into());
        }
        self.check_over(u, g.vertex(x))?;
        let tree = spanning_tree(zg, x).map_err(|_| CoveringError::NotConnected)?;
        let yg = self.source().graph();
        let mut vmap = vec![u; zg.num_vertices()];
        for v in zg.vertices() {
            let p = g.map_path(&tree.path_from_root(zg, v));
            vmap[v.0] = self.lift_path(&p, u)?.end(yg);
        }
        let mut dmap = Vec::with_capacity(zg.num_darts());
        for d in zg.darts() {
            let s = vmap[zg.src(d).0];
            let im = match g.dart(d) {
                DartImage::Dart(e) => {
                    let l = self.lift_dart(s, e).expect("coverings lift every dart");
                    if yg.dst(l) != vmap[zg.dst(d).0] {
                        let loop_ = tree.generator_loop(zg, d);
                        return Err(CoveringError::SubgroupConditionFails(zg.path_name(&loop_)));
                    }
                    DartImage::Dart(l)
                }
                DartImage::Vertex(_) => {
                    if vmap[zg.dst(d).0] != s {
                        let loop_ = tree.generator_loop(zg, d);
                        return Err(CoveringError::SubgroupConditionFails(zg.path_name(&loop_)));
                    }
                    DartImage::Vertex(s)
                }
            };
            dmap.push(im);
        }
        let mut fmap = Vec::with_capacity(z.num_faces());
        for f in z.faces() {
            let b = z.boundary(f);
            let im = match g.face(f) {
                FaceImage::Face { face, offset } => {
                    let pos = g.face_positions(f);
                    let p0 = pos.iter().position(Option::is_some).expect("faces trace something");
                    let start = vmap[zg.src(b[p0]).0];
                    let (s, y) = self.lift_face(*face, *offset, start)?;
                    FaceImage::Face { face: s, offset: y }
                }
                FaceImage::Path(p) => FaceImage::Path(self.lift_path(p, vmap[zg.src(b[0]).0])?),
            };
            fmap.push(im);
        }
        let lifted = ComplexMap { source: z, target: self.source().clone(), vmap, dmap, fmap };
        if !maps_agree(&compose_maps(&self.map, &lifted)?, g) {
            return Err(CoveringError::SubgroupConditionFails("face lift disagrees".to_string()));
        }
        Ok(lifted)
    }
}
