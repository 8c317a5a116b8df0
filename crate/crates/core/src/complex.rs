//! 2-complexes: a graph together with faces attached along closed paths.
//!
//! Faces are stored in pairs. A face `f` created with [`TwoComplex::add_face`]
//! has an even id; its inverse `f^` has the next id and boundary given by
//! `b_{f^}[i] = inv(b_f[n-1-i])`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::ComplexError;
use crate::graph::{check_name, validate_graph, DartId, Graph, Path, VertexId};
use crate::report::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(pub usize);

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TwoComplex {
    graph: Graph,
    face_names: Vec<String>,
    boundaries: Vec<Vec<DartId>>,
    face_index: HashMap<String, FaceId>,
}

/// The boundary of the inverse face under the fixed convention.
pub fn inverse_boundary(g: &Graph, b: &[DartId]) -> Vec<DartId> {
    b.iter().rev().map(|&d| g.inv(d)).collect()
}

impl TwoComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_graph(graph: Graph) -> Self {
        TwoComplex { graph, ..Self::default() }
    }

    /// Builds a complex without checking boundaries, so that
    /// [`validate_complex`] can report problems. Boundary darts out of range
    /// are kept verbatim in the inverse face.
    pub fn from_raw(graph: Graph, faces: Vec<(String, Vec<DartId>)>) -> Self {
        let mut x = TwoComplex::from_graph(graph);
        for (name, b) in faces {
            let inv_b = b.iter().rev().map(|&d| if x.graph.has_dart(d) { x.graph.inv(d) } else { d }).collect();
            x.push_pair(name, b, inv_b);
        }
        x
    }

    fn push_pair(&mut self, name: String, b: Vec<DartId>, inv_b: Vec<DartId>) -> FaceId {
        let id = FaceId(self.face_names.len());
        let inv_name = format!("{name}^");
        self.face_index.entry(name.clone()).or_insert(id);
        self.face_index.entry(inv_name.clone()).or_insert(FaceId(id.0 + 1));
        self.face_names.push(name);
        self.face_names.push(inv_name);
        self.boundaries.push(b);
        self.boundaries.push(inv_b);
        id
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId, ComplexError> {
        Ok(self.graph.add_vertex(name)?)
    }

    pub fn add_edge(&mut self, name: impl Into<String>, s: VertexId, t: VertexId) -> Result<DartId, ComplexError> {
        Ok(self.graph.add_edge(name, s, t)?)
    }

    /// Adds a face pair with the given boundary word, which must be a
    /// nonempty closed path.
    pub fn add_face(&mut self, name: impl Into<String>, boundary: Vec<DartId>) -> Result<FaceId, ComplexError> {
        let name = name.into();
        check_name(&name)?;
        if self.face_index.contains_key(&name) || self.face_index.contains_key(&format!("{name}^")) {
            return Err(ComplexError::DuplicateName(name));
        }
        if boundary.is_empty() {
            return Err(ComplexError::EmptyBoundary(name));
        }
        if let Some(&d) = boundary.iter().find(|&&d| !self.graph.has_dart(d)) {
            return Err(ComplexError::UnknownDart(d));
        }
        let p = Path::new(self.graph.src(boundary[0]), boundary.clone());
        if !p.is_valid(&self.graph) || !p.is_closed(&self.graph) {
            return Err(ComplexError::BoundaryNotClosed(name));
        }
        let inv_b = inverse_boundary(&self.graph, &boundary);
        Ok(self.push_pair(name, boundary, inv_b))
    }

    /// Adds a face whose boundary is given by dart names.
    pub fn add_face_named(&mut self, name: &str, word: &[&str]) -> Result<FaceId, ComplexError> {
        let b = word
            .iter()
            .map(|w| self.graph.dart_by_name(w).ok_or_else(|| ComplexError::UnknownName(w.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        self.add_face(name, b)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn num_darts(&self) -> usize {
        self.graph.num_darts()
    }

    pub fn num_arcs(&self) -> usize {
        self.graph.num_arcs()
    }

    /// Number of faces counting each inverse separately.
    pub fn num_faces(&self) -> usize {
        self.face_names.len()
    }

    /// Number of face pairs, i.e. geometric 2-cells.
    pub fn num_face_pairs(&self) -> usize {
        self.face_names.len() / 2
    }

    pub fn is_graph(&self) -> bool {
        self.face_names.is_empty()
    }

    pub fn faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.face_names.len()).map(FaceId)
    }

    pub fn canonical_faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.face_names.len()).step_by(2).map(FaceId)
    }

    pub fn has_face(&self, f: FaceId) -> bool {
        f.0 < self.face_names.len()
    }

    pub fn inv_face(&self, f: FaceId) -> FaceId {
        FaceId(f.0 ^ 1)
    }

    pub fn is_canonical(&self, f: FaceId) -> bool {
        f.0.is_multiple_of(2)
    }

    pub fn canonical(&self, f: FaceId) -> FaceId {
        FaceId(f.0 & !1)
    }

    pub fn boundary(&self, f: FaceId) -> &[DartId] {
        &self.boundaries[f.0]
    }

    pub fn face_len(&self, f: FaceId) -> usize {
        self.boundaries[f.0].len()
    }

    pub fn face_name(&self, f: FaceId) -> &str {
        &self.face_names[f.0]
    }

    pub fn face_by_name(&self, name: &str) -> Option<FaceId> {
        self.face_index.get(name).copied()
    }

    /// The boundary as a closed path starting at position 0.
    pub fn boundary_path(&self, f: FaceId) -> Path {
        let b = self.boundary(f);
        Path::new(self.graph.src(b[0]), b.to_vec())
    }

    /// The boundary path read from position `k`.
    pub fn boundary_path_from(&self, f: FaceId, k: usize) -> Path {
        let b = self.boundary(f);
        let n = b.len();
        let darts: Vec<DartId> = (0..n).map(|i| b[(k + i) % n]).collect();
        Path::new(self.graph.src(darts[0]), darts)
    }

    /// Positions of the boundary at which `v` appears.
    pub fn appearances(&self, f: FaceId, v: VertexId) -> Vec<usize> {
        self.boundary(f).iter().enumerate().filter(|(_, &d)| self.graph.src(d) == v).map(|(i, _)| i).collect()
    }

    pub fn boundary_names(&self, f: FaceId) -> Vec<&str> {
        self.boundary(f).iter().map(|&d| self.graph.dart_name(d)).collect()
    }

    /// A face name not yet in use, derived from `base`.
    pub fn fresh_face_name(&self, base: &str) -> String {
        crate::graph::fresh(base, |n| self.face_index.contains_key(n) || self.face_index.contains_key(&format!("{n}^")))
    }

    /// Cell counts `(vertices, arcs, face pairs)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.num_vertices(), self.num_arcs(), self.num_face_pairs())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_arcs() as i64 + self.num_face_pairs() as i64
    }
}

/// Checks graph validity, face closure and the inverse-face convention.
pub fn validate_complex(x: &TwoComplex) -> ValidationReport {
    let mut report = validate_graph(&x.graph);
    if !report.is_valid() {
        return report;
    }
    let g = &x.graph;
    if !x.face_names.len().is_multiple_of(2) || x.boundaries.len() != x.face_names.len() {
        report.violation("face tables are not paired".to_string());
        return report;
    }
    let mut seen = BTreeSet::new();
    for f in x.faces() {
        let name = x.face_name(f);
        if !seen.insert(name) {
            report.violation(format!("duplicate face name `{name}`"));
        }
        let b = x.boundary(f);
        if b.is_empty() {
            report.violation(format!("empty boundary on face `{name}`"));
            continue;
        }
        if let Some(d) = b.iter().find(|d| !g.has_dart(**d)) {
            report.violation(format!("face `{name}` uses unknown dart {d}"));
            continue;
        }
        let n = b.len();
        if (0..n).any(|i| g.dst(b[i]) != g.src(b[(i + 1) % n])) {
            report.violation(format!("boundary not closed on face `{name}`"));
            continue;
        }
        if x.is_canonical(f) {
            let expect = inverse_boundary(g, b);
            if x.boundary(x.inv_face(f)) != expect.as_slice() {
                report.violation(format!("inverse face of `{name}` has the wrong boundary"));
            }
        }
    }
    report
}

/// Replaces face `f` by two faces split along a new arc joining the
/// vertices at boundary positions `i < j`.
pub fn subdivide_face(x: &TwoComplex, f: FaceId, i: usize, j: usize) -> Result<TwoComplex, ComplexError> {
    if !x.has_face(f) {
        return Err(ComplexError::UnknownFace(f));
    }
    let b = x.boundary(f).to_vec();
    let n = b.len();
    if !(i < j && j < n) {
        return Err(ComplexError::BadPositions { face: x.face_name(f).to_string(), i, j });
    }
    let g = x.graph();
    let base = crate::graph::mangle(x.face_name(x.canonical(f)));
    let mut out = TwoComplex::from_graph(g.clone());
    let c = out.add_edge(g.fresh_arc_name(&format!("{base}_cut")), g.src(b[i]), g.src(b[j]))?;
    let ci = out.graph.inv(c);
    for h in x.canonical_faces() {
        if h == x.canonical(f) {
            let mut f1: Vec<DartId> = b[i..j].to_vec();
            f1.push(ci);
            let mut f2: Vec<DartId> = b[j..].to_vec();
            f2.extend_from_slice(&b[..i]);
            f2.push(c);
            let n1 = x.fresh_face_name(&format!("{base}_1"));
            let n2 = x.fresh_face_name(&format!("{base}_2"));
            out.add_face(n1, f1)?;
            out.add_face(n2, f2)?;
        } else {
            out.add_face(x.face_name(h), x.boundary(h).to_vec())?;
        }
    }
    Ok(out)
}

/// A subcomplex given by cell sets closed under inverses and boundaries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subcomplex {
    pub vertices: BTreeSet<VertexId>,
    pub darts: BTreeSet<DartId>,
    pub faces: BTreeSet<FaceId>,
}

impl Subcomplex {
    /// The smallest subcomplex containing the given cells.
    pub fn generated_by(
        x: &TwoComplex,
        vertices: impl IntoIterator<Item = VertexId>,
        darts: impl IntoIterator<Item = DartId>,
        faces: impl IntoIterator<Item = FaceId>,
    ) -> Self {
        let g = x.graph();
        let mut s = Subcomplex::default();
        for f in faces {
            s.faces.insert(f);
            s.faces.insert(x.inv_face(f));
            s.darts.extend(x.boundary(f).iter().copied());
        }
        s.darts.extend(darts);
        let ds: Vec<DartId> = s.darts.iter().copied().collect();
        for d in ds {
            s.darts.insert(g.inv(d));
            s.vertices.insert(g.src(d));
            s.vertices.insert(g.dst(d));
        }
        s.vertices.extend(vertices);
        s
    }

    /// Resolves cell names, trying vertices, then darts, then faces.
    pub fn from_names(x: &TwoComplex, names: &[&str]) -> Result<Self, ComplexError> {
        let g = x.graph();
        let (mut vs, mut ds, mut fs) = (Vec::new(), Vec::new(), Vec::new());
        for n in names {
            if let Some(v) = g.vertex_by_name(n) {
                vs.push(v);
            } else if let Some(d) = g.dart_by_name(n) {
                ds.push(d);
            } else if let Some(f) = x.face_by_name(n) {
                fs.push(f);
            } else {
                return Err(ComplexError::UnknownName(n.to_string()));
            }
        }
        Ok(Self::generated_by(x, vs, ds, fs))
    }

    pub fn is_subcomplex_of(&self, x: &TwoComplex) -> bool {
        let g = x.graph();
        self.vertices.iter().all(|&v| g.has_vertex(v))
            && self
                .darts
                .iter()
                .all(|&d| g.has_dart(d) && self.darts.contains(&g.inv(d)) && self.vertices.contains(&g.src(d)))
            && self.faces.iter().all(|&f| {
                x.has_face(f)
                    && self.faces.contains(&x.inv_face(f))
                    && x.boundary(f).iter().all(|d| self.darts.contains(d))
            })
    }

    pub fn is_disjoint(&self, other: &Subcomplex) -> bool {
        self.vertices.is_disjoint(&other.vertices)
    }

    /// The subcomplex as a standalone complex, with the old id of each new
    /// vertex, dart and face.
    pub fn to_complex(&self, x: &TwoComplex) -> (TwoComplex, Vec<VertexId>, Vec<DartId>, Vec<FaceId>) {
        let (g, vold, dold) = x.graph().restrict(&self.vertices, &self.darts);
        let mut dnew = HashMap::new();
        for (i, d) in dold.iter().enumerate() {
            dnew.insert(*d, DartId(i));
        }
        let mut y = TwoComplex::from_graph(g);
        let mut fold = Vec::new();
        for &f in &self.faces {
            if !x.is_canonical(f) {
                continue;
            }
            let b = x.boundary(f).iter().map(|d| dnew[d]).collect();
            y.add_face(x.face_name(f), b).expect("faces of a subcomplex are valid");
            fold.push(f);
            fold.push(x.inv_face(f));
        }
        (y, vold, dold, fold)
    }
}

/// Finds a face assignment extending a graph isomorphism, matching faces by
/// rotated boundary words. Returns, per face of `a`, the face of `b` and the
/// rotation offset.
pub(crate) fn match_faces(a: &TwoComplex, b: &TwoComplex, dmap: &[DartId]) -> Option<Vec<(FaceId, usize)>> {
    if a.num_faces() != b.num_faces() {
        return None;
    }
    let mut used = vec![false; b.num_faces()];
    let mut out = vec![(FaceId(0), 0); a.num_faces()];
    for f in a.canonical_faces() {
        let word: Vec<DartId> = a.boundary(f).iter().map(|d| dmap[d.0]).collect();
        let n = word.len();
        let mut found = None;
        'faces: for t in b.faces() {
            if used[t.0] || b.face_len(t) != n {
                continue;
            }
            let bt = b.boundary(t);
            for k in 0..n {
                if (0..n).all(|i| word[i] == bt[(i + k) % n]) {
                    found = Some((t, k));
                    break 'faces;
                }
            }
        }
        let (t, k) = found?;
        used[t.0] = true;
        used[b.inv_face(t).0] = true;
        out[f.0] = (t, k);
        out[a.inv_face(f).0] = (b.inv_face(t), (n - k) % n);
    }
    Some(out)
}
