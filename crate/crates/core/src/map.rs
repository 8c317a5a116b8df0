//! Maps of 2-complexes.
//!
//! A dart may collapse to a vertex. A face either maps onto a face with a
//! rotation offset, or onto a closed path. For a face image `Face { face,
//! offset }` the first non-collapsed boundary dart of the source lands at
//! position `offset` of the target boundary and later darts follow
//! cyclically; the non-collapsed trace may wind around the target several
//! times.

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::{FaceId, TwoComplex};
use crate::error::ComplexError;
use crate::graph::{DartId, DartImage, Path, VertexId};
use crate::homotopy::{homotopic_bounded, HomotopyBounds, HomotopyVerdict};
use crate::report::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FaceImage {
    Face { face: FaceId, offset: usize },
    Path(Path),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMap {
    pub source: Arc<TwoComplex>,
    pub target: Arc<TwoComplex>,
    pub vmap: Vec<VertexId>,
    pub dmap: Vec<DartImage>,
    pub fmap: Vec<FaceImage>,
}

pub(crate) fn same_complex(a: &Arc<TwoComplex>, b: &Arc<TwoComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl ComplexMap {
    pub fn identity(x: Arc<TwoComplex>) -> Self {
        ComplexMap {
            vmap: x.graph().vertices().collect(),
            dmap: x.graph().darts().map(DartImage::Dart).collect(),
            fmap: x.faces().map(|f| FaceImage::Face { face: f, offset: 0 }).collect(),
            source: x.clone(),
            target: x,
        }
    }

    /// Builds a map from images of forward darts and canonical faces; the
    /// images of inverses are derived.
    pub fn from_forward(
        source: Arc<TwoComplex>,
        target: Arc<TwoComplex>,
        vmap: Vec<VertexId>,
        dart: impl Fn(DartId) -> DartImage,
        face: impl Fn(FaceId) -> FaceImage,
    ) -> Self {
        let sg = source.graph();
        let tg = target.graph();
        let mut dmap = vec![DartImage::Vertex(VertexId(0)); sg.num_darts()];
        for d in sg.arcs() {
            let im = dart(d);
            dmap[d.0] = im;
            dmap[sg.inv(d).0] = match im {
                DartImage::Dart(e) => DartImage::Dart(tg.inv(e)),
                v => v,
            };
        }
        let mut fmap = vec![FaceImage::Path(Path::empty(VertexId(0))); source.num_faces()];
        for f in source.canonical_faces() {
            let im = face(f);
            fmap[source.inv_face(f).0] = inverse_face_image(&target, &im);
            fmap[f.0] = im;
        }
        ComplexMap { source, target, vmap, dmap, fmap }
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vmap[v.0]
    }

    pub fn dart(&self, d: DartId) -> DartImage {
        self.dmap[d.0]
    }

    pub fn face(&self, f: FaceId) -> &FaceImage {
        &self.fmap[f.0]
    }

    pub fn is_dimension_preserving(&self) -> bool {
        self.dmap.iter().all(|d| matches!(d, DartImage::Dart(_)))
            && self.fmap.iter().all(|f| matches!(f, FaceImage::Face { .. }))
    }

    /// The image of a dart known not to collapse.
    pub fn dart_image(&self, d: DartId) -> Option<DartId> {
        self.dmap[d.0].dart()
    }

    /// The image of a face known to map onto a face.
    pub fn face_target(&self, f: FaceId) -> Option<(FaceId, usize)> {
        match self.fmap[f.0] {
            FaceImage::Face { face, offset } => Some((face, offset)),
            FaceImage::Path(_) => None,
        }
    }

    /// Image of a path, dropping collapsed darts.
    pub fn map_path(&self, p: &Path) -> Path {
        Path::new(self.vmap[p.start.0], p.darts.iter().filter_map(|&d| self.dmap[d.0].dart()).collect())
    }

    /// The non-collapsed dart images along the boundary of `f`.
    pub fn trace(&self, f: FaceId) -> Vec<DartId> {
        self.source.boundary(f).iter().filter_map(|&d| self.dmap[d.0].dart()).collect()
    }

    /// For a face image onto a face, the target position of each source
    /// boundary position (`None` where the dart collapses).
    pub fn face_positions(&self, f: FaceId) -> Vec<Option<usize>> {
        let b = self.source.boundary(f);
        match self.fmap[f.0] {
            FaceImage::Face { face, offset } => {
                let n = self.target.face_len(face);
                let mut t = 0;
                b.iter()
                    .map(|&d| match self.dmap[d.0] {
                        DartImage::Dart(_) => {
                            let p = (offset + t) % n;
                            t += 1;
                            Some(p)
                        }
                        DartImage::Vertex(_) => None,
                    })
                    .collect()
            }
            FaceImage::Path(_) => vec![None; b.len()],
        }
    }

    /// The image of face `f` as a closed path in the target, starting at
    /// the image of the first boundary vertex.
    pub fn face_path(&self, f: FaceId) -> Path {
        let start = self.vmap[self.source.graph().src(self.source.boundary(f)[0]).0];
        Path::new(start, self.trace(f))
    }
}

pub(crate) fn inverse_face_image(target: &TwoComplex, im: &FaceImage) -> FaceImage {
    match im {
        FaceImage::Face { face, offset } => {
            let n = target.face_len(*face);
            FaceImage::Face { face: target.inv_face(*face), offset: (n - offset % n) % n }
        }
        FaceImage::Path(p) => FaceImage::Path(p.inverse(target.graph())),
    }
}

fn power_of(c: &[DartId], g: &[DartId]) -> bool {
    if g.is_empty() {
        return c.is_empty();
    }
    !c.is_empty() && c.len().is_multiple_of(g.len()) && c.iter().enumerate().all(|(i, d)| *d == g[i % g.len()])
}

/// Checks every map invariant. Face images given as paths are tested for
/// homotopic triviality with a bounded search; an inconclusive search is
/// recorded as a note.
pub fn validate_map(m: &ComplexMap) -> ValidationReport {
    validate_map_with(m, HomotopyBounds::default())
}

pub fn validate_map_with(m: &ComplexMap, bounds: HomotopyBounds) -> ValidationReport {
    let mut r = ValidationReport::default();
    let (x, y) = (&*m.source, &*m.target);
    let (sg, tg) = (x.graph(), y.graph());
    if m.vmap.len() != sg.num_vertices() || m.dmap.len() != sg.num_darts() || m.fmap.len() != x.num_faces() {
        r.violation("map tables do not match the source cells".to_string());
        return r;
    }
    for v in sg.vertices() {
        if !tg.has_vertex(m.vmap[v.0]) {
            r.violation(format!("vertex `{}` maps outside the target", sg.vertex_name(v)));
        }
    }
    if !r.is_valid() {
        return r;
    }
    for d in sg.darts() {
        let name = sg.dart_name(d);
        let (s, t) = (m.vmap[sg.src(d).0], m.vmap[sg.dst(d).0]);
        match m.dmap[d.0] {
            DartImage::Dart(e) => {
                if !tg.has_dart(e) {
                    r.violation(format!("dart `{name}` maps outside the target"));
                    continue;
                }
                if tg.src(e) != s || tg.dst(e) != t {
                    r.violation(format!("dart `{name}` image has wrong endpoints"));
                }
                if m.dmap[sg.inv(d).0] != DartImage::Dart(tg.inv(e)) {
                    r.violation(format!("dart `{name}`: image of inverse is not inverse of image"));
                }
            }
            DartImage::Vertex(w) => {
                if w != s || w != t {
                    r.violation(format!("dart `{name}` collapses to a vertex off its endpoints"));
                }
                if m.dmap[sg.inv(d).0] != DartImage::Vertex(w) {
                    r.violation(format!("dart `{name}`: inverse collapses elsewhere"));
                }
            }
        }
    }
    if !r.is_valid() {
        return r;
    }
    for f in x.faces() {
        let name = x.face_name(f);
        let c = m.trace(f);
        match &m.fmap[f.0] {
            FaceImage::Face { face, offset } => {
                if !y.has_face(*face) {
                    r.violation(format!("face `{name}` maps outside the target"));
                    continue;
                }
                let bt = y.boundary(*face);
                let n = bt.len();
                if *offset >= n {
                    r.violation(format!("face `{name}` offset {offset} out of range"));
                    continue;
                }
                if c.is_empty() || !c.len().is_multiple_of(n) {
                    r.violation(format!(
                        "face `{name}` boundary length {} does not match `{}`",
                        c.len(),
                        y.face_name(*face)
                    ));
                    continue;
                }
                if let Some(i) = (0..c.len()).find(|&i| c[i] != bt[(offset + i) % n]) {
                    r.violation(format!("commuting square fails on face `{name}` at trace position {i}"));
                }
            }
            FaceImage::Path(p) => {
                if !p.is_valid(tg) || !p.is_closed(tg) {
                    r.violation(format!("(M2) image of face `{name}` is not a closed path"));
                    continue;
                }
                let start = m.vmap[sg.src(x.boundary(f)[0]).0];
                if p.start != start {
                    r.violation(format!("(M2) image path of face `{name}` starts elsewhere"));
                    continue;
                }
                if !power_of(&c, &p.darts) {
                    r.violation(format!("(M2) boundary of face `{name}` does not traverse its image path"));
                    continue;
                }
                if x.is_canonical(f) {
                    match homotopic_bounded(y, p, &Path::empty(start), bounds) {
                        Ok(HomotopyVerdict::Proven(_)) => {}
                        Ok(HomotopyVerdict::Refuted(why)) => {
                            r.violation(format!("(M2) image of face `{name}` is not homotopically trivial: {why}"))
                        }
                        Ok(HomotopyVerdict::Inconclusive(why)) => {
                            r.note(format!("(M2) triviality of face `{name}` image inconclusive: {why}"))
                        }
                        Err(e) => r.violation(format!("(M2) face `{name}`: {e}")),
                    }
                }
            }
        }
    }
    r
}

/// Composition `g ∘ f`.
pub fn compose_maps(g: &ComplexMap, f: &ComplexMap) -> Result<ComplexMap, ComplexError> {
    if !same_complex(&f.target, &g.source) {
        return Err(ComplexError::TargetMismatch);
    }
    let x = &f.source;
    let vmap: Vec<VertexId> = f.vmap.iter().map(|v| g.vmap[v.0]).collect();
    let dmap: Vec<DartImage> = f
        .dmap
        .iter()
        .map(|im| match *im {
            DartImage::Dart(e) => g.dmap[e.0],
            DartImage::Vertex(v) => DartImage::Vertex(g.vmap[v.0]),
        })
        .collect();
    let mut fmap = Vec::with_capacity(x.num_faces());
    for s in x.faces() {
        let start = vmap[x.graph().src(x.boundary(s)[0]).0];
        let im = match (&f.fmap[s.0], f.face_target(s).and_then(|(t, _)| g.face_target(t))) {
            (FaceImage::Face { face: t, .. }, Some((rho, _))) => {
                let pf = f.face_positions(s);
                let pg = g.face_positions(*t);
                match pf.iter().flatten().find_map(|&j| pg[j]) {
                    Some(k) => FaceImage::Face { face: rho, offset: k },
                    None => FaceImage::Path(Path::empty(start)),
                }
            }
            _ => {
                let darts = x.boundary(s).iter().filter_map(|d| dmap[d.0].dart()).collect();
                FaceImage::Path(Path::new(start, darts))
            }
        };
        fmap.push(im);
    }
    Ok(ComplexMap { source: f.source.clone(), target: g.target.clone(), vmap, dmap, fmap })
}

/// Equality of the underlying cell maps, with path images compared by
/// their traces.
pub fn maps_agree(a: &ComplexMap, b: &ComplexMap) -> bool {
    if a.vmap != b.vmap || a.dmap != b.dmap || a.fmap.len() != b.fmap.len() {
        return false;
    }
    a.source.faces().all(|f| match (&a.fmap[f.0], &b.fmap[f.0]) {
        (FaceImage::Face { .. }, FaceImage::Face { .. }) => a.fmap[f.0] == b.fmap[f.0],
        (FaceImage::Path(_), FaceImage::Path(_)) => a.trace(f) == b.trace(f),
        _ => false,
    })
}

/// Given `q: A -> B` surjective on cells and `t: A -> C`, returns the
/// unique `h: B -> C` with `h ∘ q = t`.
pub fn factor_through_quotient(q: &ComplexMap, t: &ComplexMap) -> Result<ComplexMap, ComplexError> {
    if !same_complex(&q.source, &t.source) {
        return Err(ComplexError::TargetMismatch);
    }
    let a = &*q.source;
    let b = q.target.clone();
    let (ag, bg) = (a.graph(), b.graph());
    let fail = |what: String| ComplexError::SquareDoesNotCommute(what);
    let mut vmap: Vec<Option<VertexId>> = vec![None; bg.num_vertices()];
    for v in ag.vertices() {
        let slot = &mut vmap[q.vmap[v.0].0];
        match slot {
            Some(w) if *w != t.vmap[v.0] => {
                return Err(fail(format!("vertex `{}` of the quotient", bg.vertex_name(q.vmap[v.0]))))
            }
            _ => *slot = Some(t.vmap[v.0]),
        }
    }
    let mut dmap: Vec<Option<DartImage>> = vec![None; bg.num_darts()];
    for d in ag.darts() {
        if let DartImage::Dart(e) = q.dmap[d.0] {
            let slot = &mut dmap[e.0];
            match slot {
                Some(im) if *im != t.dmap[d.0] => {
                    return Err(fail(format!("dart `{}` of the quotient", bg.dart_name(e))))
                }
                _ => *slot = Some(t.dmap[d.0]),
            }
        }
    }
    let vmap = vmap
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| ComplexError::MissingImage(bg.vertex_name(VertexId(i)).into())))
        .collect::<Result<Vec<_>, _>>()?;
    let dmap = dmap
        .into_iter()
        .enumerate()
        .map(|(i, d)| d.ok_or_else(|| ComplexError::MissingImage(bg.dart_name(DartId(i)).into())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut fmap: Vec<Option<FaceImage>> = vec![None; b.num_faces()];
    for s in a.faces() {
        let Some((rho, _)) = q.face_target(s) else { continue };
        if fmap[rho.0].is_some() {
            continue;
        }
        let start = vmap[bg.src(b.boundary(rho)[0]).0];
        let trace: Vec<DartId> = b.boundary(rho).iter().filter_map(|e| dmap[e.0].dart()).collect();
        let im = match t.face_target(s) {
            Some((tau, _)) => {
                // position j of rho corresponds to position p of s
                let pq = q.face_positions(s);
                let pt = t.face_positions(s);
                let mut corr: HashMap<usize, Option<usize>> = HashMap::new();
                for (i, j) in pq.iter().enumerate() {
                    if let Some(j) = j {
                        corr.entry(*j).or_insert(pt[i]);
                    }
                }
                let first = (0..b.face_len(rho)).find(|&j| dmap[b.boundary(rho)[j].0].dart().is_some());
                match first.and_then(|j| corr.get(&j).copied().flatten()) {
                    Some(k) => FaceImage::Face { face: tau, offset: k },
                    None => FaceImage::Path(Path::new(start, trace)),
                }
            }
            None => FaceImage::Path(Path::new(start, trace)),
        };
        fmap[rho.0] = Some(im);
    }
    let fmap = fmap
        .into_iter()
        .enumerate()
        .map(|(i, f)| f.ok_or_else(|| ComplexError::MissingImage(b.face_name(FaceId(i)).into())))
        .collect::<Result<Vec<_>, _>>()?;
    let h = ComplexMap { source: b, target: t.target.clone(), vmap, dmap, fmap };
    let hq = compose_maps(&h, q)?;
    if !maps_agree(&hq, t) {
        return Err(fail("composite differs from the given map".to_string()));
    }
    Ok(h)
}

/// Local continuity data at a vertex of a dimension-preserving map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalContinuity {
    pub vertex: VertexId,
    pub image: VertexId,
    /// Darts at the vertex paired with their images.
    pub edge_map: Vec<(DartId, DartId)>,
    pub edge_injective: bool,
    pub edge_surjective: bool,
    pub faces: Vec<FaceContinuity>,
}

/// Face local continuity onto one canonical target face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceContinuity {
    pub target_face: FaceId,
    /// `(source face, appearance position)` paired with the target position.
    pub map: Vec<((FaceId, usize), usize)>,
    pub injective: bool,
    pub surjective: bool,
}

impl LocalContinuity {
    pub fn is_bijective(&self) -> bool {
        self.edge_injective && self.edge_surjective && self.faces.iter().all(|f| f.injective && f.surjective)
    }

    pub fn is_injective(&self) -> bool {
        self.edge_injective && self.faces.iter().all(|f| f.injective)
    }
}

fn injective_surjective(images: &[usize], codomain: &[usize]) -> (bool, bool) {
    let mut sorted = images.to_vec();
    sorted.sort_unstable();
    let before = sorted.len();
    sorted.dedup();
    let inj = sorted.len() == before;
    let sur = codomain.iter().all(|c| sorted.binary_search(c).is_ok());
    (inj, sur)
}

/// Local continuity at `u`, with faces grouped by canonical target face.
/// `faces_into` lists, per target face, the source faces mapping onto it.
pub fn local_continuity(m: &ComplexMap, u: VertexId) -> Result<LocalContinuity, ComplexError> {
    let faces_into = faces_into(m)?;
    local_continuity_with(m, u, &faces_into)
}

pub(crate) fn faces_into(m: &ComplexMap) -> Result<Vec<Vec<FaceId>>, ComplexError> {
    if !m.is_dimension_preserving() {
        return Err(ComplexError::NotDimensionPreserving);
    }
    let mut out = vec![Vec::new(); m.target.num_faces()];
    for s in m.source.faces() {
        let (t, _) = m.face_target(s).expect("dimension preserving");
        out[t.0].push(s);
    }
    Ok(out)
}

pub(crate) fn local_continuity_with(
    m: &ComplexMap,
    u: VertexId,
    faces_into: &[Vec<FaceId>],
) -> Result<LocalContinuity, ComplexError> {
    let (x, y) = (&*m.source, &*m.target);
    let v = m.vmap[u.0];
    let darts = x.graph().darts_from(u);
    let edge_map: Vec<(DartId, DartId)> = darts
        .iter()
        .map(|&d| m.dart_image(d).map(|e| (d, e)).ok_or(ComplexError::NotDimensionPreserving))
        .collect::<Result<_, _>>()?;
    let targets: Vec<usize> = y.graph().darts_from(v).iter().map(|d| d.0).collect();
    let images: Vec<usize> = edge_map.iter().map(|(_, e)| e.0).collect();
    let (edge_injective, edge_surjective) = injective_surjective(&images, &targets);
    let mut faces = Vec::new();
    for t in y.canonical_faces() {
        let app_t = y.appearances(t, v);
        let mut map = Vec::new();
        for &s in &faces_into[t.0] {
            let (_, k) = m.face_target(s).expect("dimension preserving");
            let n = y.face_len(t);
            for i in x.appearances(s, u) {
                map.push(((s, i), (i + k) % n));
            }
        }
        if app_t.is_empty() && map.is_empty() {
            continue;
        }
        let images: Vec<usize> = map.iter().map(|(_, j)| *j).collect();
        let (injective, surjective) = injective_surjective(&images, &app_t);
        faces.push(FaceContinuity { target_face: t, map, injective, surjective });
    }
    Ok(LocalContinuity { vertex: u, image: v, edge_map, edge_injective, edge_surjective, faces })
}

/// A valid dimension-preserving map bijective on all cells.
pub fn is_isomorphism(m: &ComplexMap) -> bool {
    if !m.is_dimension_preserving() || !validate_map(m).is_valid() {
        return false;
    }
    let (x, y) = (&*m.source, &*m.target);
    if x.num_vertices() != y.num_vertices() || x.num_darts() != y.num_darts() || x.num_faces() != y.num_faces() {
        return false;
    }
    let mut seen = vec![false; y.num_vertices()];
    for v in &m.vmap {
        if std::mem::replace(&mut seen[v.0], true) {
            return false;
        }
    }
    let mut seen = vec![false; y.num_darts()];
    for d in &m.dmap {
        let e = d.dart().expect("dimension preserving");
        if std::mem::replace(&mut seen[e.0], true) {
            return false;
        }
    }
    let mut seen = vec![false; y.num_faces()];
    for f in x.faces() {
        let (t, _) = m.face_target(f).expect("dimension preserving");
        if std::mem::replace(&mut seen[t.0], true) {
            return false;
        }
    }
    true
}

/// Inverse of an isomorphism.
pub fn inverse_isomorphism(m: &ComplexMap) -> Option<ComplexMap> {
    if !is_isomorphism(m) {
        return None;
    }
    let (x, y) = (&*m.source, &*m.target);
    let mut vmap = vec![VertexId(0); y.num_vertices()];
    for v in x.graph().vertices() {
        vmap[m.vmap[v.0].0] = v;
    }
    let mut dmap = vec![DartImage::Vertex(VertexId(0)); y.num_darts()];
    for d in x.graph().darts() {
        dmap[m.dart_image(d)?.0] = DartImage::Dart(d);
    }
    let mut fmap = vec![FaceImage::Path(Path::empty(VertexId(0))); y.num_faces()];
    for f in x.faces() {
        let (t, k) = m.face_target(f)?;
        let n = y.face_len(t);
        fmap[t.0] = FaceImage::Face { face: f, offset: (n - k) % n };
    }
    Some(ComplexMap { source: m.target.clone(), target: m.source.clone(), vmap, dmap, fmap })
}

/// Searches for an isomorphism `a -> b`.
pub fn complex_isomorphism(a: &Arc<TwoComplex>, b: &Arc<TwoComplex>) -> Option<ComplexMap> {
    let mut found = None;
    crate::graph::for_each_graph_isomorphism(a.graph(), b.graph(), |iso| {
        if let Some(faces) = crate::complex::match_faces(a, b, &iso.dmap) {
            found = Some(ComplexMap {
                source: a.clone(),
                target: b.clone(),
                vmap: iso.vmap.clone(),
                dmap: iso.dmap.iter().map(|&d| DartImage::Dart(d)).collect(),
                fmap: faces.into_iter().map(|(face, offset)| FaceImage::Face { face, offset }).collect(),
            });
            true
        } else {
            false
        }
    });
    found
}

pub fn are_isomorphic(a: &Arc<TwoComplex>, b: &Arc<TwoComplex>) -> bool {
    complex_isomorphism(a, b).is_some()
}

/// Assembles a map from cell names, deriving inverse images.
#[derive(Clone, Debug)]
pub struct MapBuilder {
    source: Arc<TwoComplex>,
    target: Arc<TwoComplex>,
    vmap: Vec<Option<VertexId>>,
    dmap: Vec<Option<DartImage>>,
    fmap: Vec<Option<FaceImage>>,
}

impl MapBuilder {
    pub fn new(source: Arc<TwoComplex>, target: Arc<TwoComplex>) -> Self {
        MapBuilder {
            vmap: vec![None; source.num_vertices()],
            dmap: vec![None; source.num_darts()],
            fmap: vec![None; source.num_faces()],
            source,
            target,
        }
    }

    fn sv(&self, n: &str) -> Result<VertexId, ComplexError> {
        self.source.graph().vertex_by_name(n).ok_or_else(|| ComplexError::UnknownName(n.into()))
    }
    fn tv(&self, n: &str) -> Result<VertexId, ComplexError> {
        self.target.graph().vertex_by_name(n).ok_or_else(|| ComplexError::UnknownName(n.into()))
    }
    fn sd(&self, n: &str) -> Result<DartId, ComplexError> {
        self.source.graph().dart_by_name(n).ok_or_else(|| ComplexError::UnknownName(n.into()))
    }
    fn td(&self, n: &str) -> Result<DartId, ComplexError> {
        self.target.graph().dart_by_name(n).ok_or_else(|| ComplexError::UnknownName(n.into()))
    }

    pub fn vertex(&mut self, a: &str, b: &str) -> Result<&mut Self, ComplexError> {
        let (a, b) = (self.sv(a)?, self.tv(b)?);
        self.vmap[a.0] = Some(b);
        Ok(self)
    }

    pub fn dart(&mut self, a: &str, b: &str) -> Result<&mut Self, ComplexError> {
        let (a, b) = (self.sd(a)?, self.td(b)?);
        let (sg, tg) = (self.source.graph(), self.target.graph());
        self.dmap[a.0] = Some(DartImage::Dart(b));
        self.dmap[sg.inv(a).0] = Some(DartImage::Dart(tg.inv(b)));
        Ok(self)
    }

    pub fn collapse(&mut self, a: &str, v: &str) -> Result<&mut Self, ComplexError> {
        let (a, v) = (self.sd(a)?, self.tv(v)?);
        let inv = self.source.graph().inv(a);
        self.dmap[a.0] = Some(DartImage::Vertex(v));
        self.dmap[inv.0] = Some(DartImage::Vertex(v));
        Ok(self)
    }

    pub fn face(&mut self, a: &str, b: &str, offset: usize) -> Result<&mut Self, ComplexError> {
        let fa = self.source.face_by_name(a).ok_or_else(|| ComplexError::UnknownName(a.into()))?;
        let fb = self.target.face_by_name(b).ok_or_else(|| ComplexError::UnknownName(b.into()))?;
        self.set_face(fa, FaceImage::Face { face: fb, offset });
        Ok(self)
    }

    /// Face onto a path given by its start vertex and dart names.
    pub fn face_path(&mut self, a: &str, start: &str, word: &[&str]) -> Result<&mut Self, ComplexError> {
        let fa = self.source.face_by_name(a).ok_or_else(|| ComplexError::UnknownName(a.into()))?;
        let s = self.tv(start)?;
        let darts = word.iter().map(|w| self.td(w)).collect::<Result<Vec<_>, _>>()?;
        self.set_face(fa, FaceImage::Path(Path::new(s, darts)));
        Ok(self)
    }

    pub fn set_vertex(&mut self, a: VertexId, b: VertexId) -> &mut Self {
        self.vmap[a.0] = Some(b);
        self
    }

    pub fn set_dart(&mut self, a: DartId, b: DartImage) -> &mut Self {
        let inv = self.source.graph().inv(a);
        self.dmap[a.0] = Some(b);
        self.dmap[inv.0] = Some(match b {
            DartImage::Dart(e) => DartImage::Dart(self.target.graph().inv(e)),
            v => v,
        });
        self
    }

    pub fn set_face(&mut self, a: FaceId, im: FaceImage) -> &mut Self {
        let inv = self.source.inv_face(a);
        self.fmap[inv.0] = Some(inverse_face_image(&self.target, &im));
        self.fmap[a.0] = Some(im);
        self
    }

    /// Fills in vertex images implied by dart images.
    fn infer_vertices(&mut self) {
        let (sg, tg) = (self.source.graph(), self.target.graph());
        for d in sg.darts() {
            if self.vmap[sg.src(d).0].is_none() {
                self.vmap[sg.src(d).0] = match self.dmap[d.0] {
                    Some(DartImage::Dart(e)) => Some(tg.src(e)),
                    Some(DartImage::Vertex(v)) => Some(v),
                    None => None,
                };
            }
        }
    }

    pub fn build(&mut self) -> Result<ComplexMap, ComplexError> {
        self.infer_vertices();
        let (sg, x) = (self.source.graph(), &self.source);
        let vmap = self
            .vmap
            .iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| ComplexError::MissingImage(sg.vertex_name(VertexId(i)).into())))
            .collect::<Result<Vec<_>, _>>()?;
        let dmap = self
            .dmap
            .iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| ComplexError::MissingImage(sg.dart_name(DartId(i)).into())))
            .collect::<Result<Vec<_>, _>>()?;
        let fmap = self
            .fmap
            .iter()
            .enumerate()
            .map(|(i, v)| v.clone().ok_or_else(|| ComplexError::MissingImage(x.face_name(FaceId(i)).into())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ComplexMap { source: self.source.clone(), target: self.target.clone(), vmap, dmap, fmap })
    }
}
