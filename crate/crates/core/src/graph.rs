//! Finite graphs (1-complexes) stored as dart structures.
//!
//! A graph is a set of vertices and a set of darts (directed edges) together
//! with a start map `src` and a fixed-point-free involution `inv`. An arc is a
//! dart/inverse pair. Darts created through [`Graph::add_edge`] come in
//! adjacent pairs named `e` and `e^`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::report::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DartId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v#{}", self.0)
    }
}

impl fmt::Display for DartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate cell name `{0}`")]
    DuplicateName(String),
    #[error("invalid cell name `{0}`")]
    InvalidName(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown dart {0}")]
    UnknownDart(DartId),
    #[error("graph is not connected")]
    NotConnected,
    #[error("not a quotient relation: class of dart `{0}` contains its inverse but no vertex")]
    NotQuotientRelation(String),
    #[error("vertex `{0}` cannot be smoothed")]
    NotSmoothable(String),
}

/// A cell of a graph, used to name generating pairs of a quotient relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphCell {
    Vertex(VertexId),
    Dart(DartId),
}

/// Image of a dart under a graph map: another dart, or a vertex when the
/// dart is collapsed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DartImage {
    Dart(DartId),
    Vertex(VertexId),
}

impl DartImage {
    pub fn dart(self) -> Option<DartId> {
        match self {
            DartImage::Dart(d) => Some(d),
            DartImage::Vertex(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    vertex_names: Vec<String>,
    dart_names: Vec<String>,
    src: Vec<VertexId>,
    inv: Vec<DartId>,
    vertex_index: HashMap<String, VertexId>,
    dart_index: HashMap<String, DartId>,
}

pub(crate) fn check_name(name: &str) -> Result<(), GraphError> {
    if name.is_empty()
        || name.ends_with('^')
        || name.starts_with("v:")
        || name.starts_with('@')
        || name.chars().any(char::is_whitespace)
        || name.contains('#')
    {
        return Err(GraphError::InvalidName(name.to_string()));
    }
    Ok(())
}

/// Replaces the inverse marker so a dart name can be embedded inside a
/// compound name.
pub(crate) fn mangle(name: &str) -> String {
    name.replace('^', "~")
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from raw tables without checking them. Out of range
    /// indices are kept as-is so that [`validate_graph`] can report them.
    pub fn from_raw(vertex_names: Vec<String>, dart_names: Vec<String>, src: Vec<usize>, inv: Vec<usize>) -> Self {
        let mut vertex_index = HashMap::new();
        for (i, n) in vertex_names.iter().enumerate() {
            vertex_index.entry(n.clone()).or_insert(VertexId(i));
        }
        let mut dart_index = HashMap::new();
        for (i, n) in dart_names.iter().enumerate() {
            dart_index.entry(n.clone()).or_insert(DartId(i));
        }
        Graph {
            vertex_names,
            dart_names,
            src: src.into_iter().map(VertexId).collect(),
            inv: inv.into_iter().map(DartId).collect(),
            vertex_index,
            dart_index,
        }
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId, GraphError> {
        let name = name.into();
        check_name(&name)?;
        if self.vertex_index.contains_key(&name) {
            return Err(GraphError::DuplicateName(name));
        }
        let id = VertexId(self.vertex_names.len());
        self.vertex_index.insert(name.clone(), id);
        self.vertex_names.push(name);
        Ok(id)
    }

    /// Adds an arc `name: s -> t`, returning the forward dart. The inverse
    /// dart is named `name^` and has the next id.
    pub fn add_edge(&mut self, name: impl Into<String>, s: VertexId, t: VertexId) -> Result<DartId, GraphError> {
        let name = name.into();
        check_name(&name)?;
        let inv_name = format!("{name}^");
        if self.dart_index.contains_key(&name) || self.dart_index.contains_key(&inv_name) {
            return Err(GraphError::DuplicateName(name));
        }
        for v in [s, t] {
            if v.0 >= self.vertex_names.len() {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        let d = DartId(self.dart_names.len());
        let e = DartId(d.0 + 1);
        self.dart_index.insert(name.clone(), d);
        self.dart_index.insert(inv_name.clone(), e);
        self.dart_names.push(name);
        self.dart_names.push(inv_name);
        self.src.push(s);
        self.src.push(t);
        self.inv.push(e);
        self.inv.push(d);
        Ok(d)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_darts(&self) -> usize {
        self.dart_names.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.dart_names.len() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len()).map(VertexId)
    }

    pub fn darts(&self) -> impl Iterator<Item = DartId> + '_ {
        (0..self.dart_names.len()).map(DartId)
    }

    /// One dart per arc: the one with the smaller id.
    pub fn arcs(&self) -> impl Iterator<Item = DartId> + '_ {
        self.darts().filter(move |&d| self.is_forward(d))
    }

    pub fn is_forward(&self, d: DartId) -> bool {
        d < self.inv(d)
    }

    pub fn src(&self, d: DartId) -> VertexId {
        self.src[d.0]
    }

    pub fn dst(&self, d: DartId) -> VertexId {
        self.src[self.inv[d.0].0]
    }

    pub fn inv(&self, d: DartId) -> DartId {
        self.inv[d.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn dart_name(&self, d: DartId) -> &str {
        &self.dart_names[d.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn dart_by_name(&self, name: &str) -> Option<DartId> {
        self.dart_index.get(name).copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        v.0 < self.vertex_names.len()
    }

    pub fn has_dart(&self, d: DartId) -> bool {
        d.0 < self.dart_names.len()
    }

    /// Darts starting at `v`, in id order.
    pub fn darts_from(&self, v: VertexId) -> Vec<DartId> {
        self.darts().filter(|&d| self.src(d) == v).collect()
    }

    pub fn valency(&self, v: VertexId) -> usize {
        self.src.iter().filter(|&&s| s == v).count()
    }

    /// Adjacency lists indexed by vertex.
    pub fn star(&self) -> Vec<Vec<DartId>> {
        let mut out = vec![Vec::new(); self.num_vertices()];
        for d in self.darts() {
            out[self.src(d).0].push(d);
        }
        out
    }

    /// A vertex name not yet in use, derived from `base`.
    pub fn fresh_vertex_name(&self, base: &str) -> String {
        fresh(base, |n| self.vertex_index.contains_key(n))
    }

    /// An arc name not yet in use (neither `n` nor `n^` taken).
    pub fn fresh_arc_name(&self, base: &str) -> String {
        fresh(base, |n| self.dart_index.contains_key(n) || self.dart_index.contains_key(&format!("{n}^")))
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.darts.is_empty() {
            return format!("v:{}", self.vertex_name(p.start));
        }
        p.darts.iter().map(|&d| self.dart_name(d)).collect::<Vec<_>>().join(" ")
    }

    /// Parses a whitespace separated dart word starting at `start`.
    pub fn parse_path(&self, start: VertexId, word: &[&str]) -> Option<Path> {
        let darts = word.iter().map(|w| self.dart_by_name(w)).collect::<Option<Vec<_>>>()?;
        let p = Path { start, darts };
        p.is_valid(self).then_some(p)
    }

    /// Restriction to the given vertex and dart sets. Darts must be closed
    /// under inverse with both endpoints kept. Returns the subgraph and, for
    /// each new vertex and dart, the old id.
    pub fn restrict(
        &self,
        vertices: &BTreeSet<VertexId>,
        darts: &BTreeSet<DartId>,
    ) -> (Graph, Vec<VertexId>, Vec<DartId>) {
        let mut g = Graph::new();
        let mut vnew = HashMap::new();
        let mut vold = Vec::new();
        for &v in vertices {
            let id = g.add_vertex(self.vertex_name(v)).expect("names are unique");
            vnew.insert(v, id);
            vold.push(v);
        }
        let mut dold = Vec::new();
        for &d in darts {
            if !self.is_forward(d) {
                continue;
            }
            let s = vnew[&self.src(d)];
            let t = vnew[&self.dst(d)];
            g.add_edge(self.dart_name(d), s, t).expect("names are unique");
            dold.push(d);
            dold.push(self.inv(d));
        }
        (g, vold, dold)
    }
}

pub(crate) fn fresh(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}'{i}")).find(|n| !taken(n)).expect("infinitely many candidates")
}

/// Checks every defining property of a graph.
pub fn validate_graph(g: &Graph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let nv = g.vertex_names.len();
    let nd = g.dart_names.len();
    if g.src.len() != nd || g.inv.len() != nd {
        report.violation(format!(
            "table sizes disagree: {} darts, {} src entries, {} inv entries",
            nd,
            g.src.len(),
            g.inv.len()
        ));
        return report;
    }
    let mut seen = BTreeSet::new();
    for n in &g.vertex_names {
        if !seen.insert(n) {
            report.violation(format!("duplicate vertex name `{n}`"));
        }
    }
    let mut seen = BTreeSet::new();
    for n in &g.dart_names {
        if !seen.insert(n) {
            report.violation(format!("duplicate dart name `{n}`"));
        }
    }
    for d in 0..nd {
        let name = &g.dart_names[d];
        if g.src[d].0 >= nv {
            report.violation(format!("missing src for dart `{name}`"));
        }
        let e = g.inv[d].0;
        if e >= nd {
            report.violation(format!("dangling inverse for dart `{name}`"));
            continue;
        }
        if e == d {
            report.violation(format!("involution fixed point on dart `{name}`"));
            continue;
        }
        if g.inv[e].0 != d {
            report.violation(format!("inverse of dart `{name}` is not involutive"));
            continue;
        }
        if d < e {
            let other = &g.dart_names[e];
            if *other != format!("{name}^") {
                report.violation(format!("dart `{name}` has inverse named `{other}`"));
            }
        }
    }
    if !nd.is_multiple_of(2) && !report.violations.is_empty() {
        report.violation("odd number of darts".to_string());
    }
    report
}

/// A directed path given by its start vertex and dart sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: VertexId,
    pub darts: Vec<DartId>,
}

impl Path {
    pub fn empty(v: VertexId) -> Self {
        Path { start: v, darts: Vec::new() }
    }

    pub fn new(start: VertexId, darts: Vec<DartId>) -> Self {
        Path { start, darts }
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn end(&self, g: &Graph) -> VertexId {
        self.darts.last().map_or(self.start, |&d| g.dst(d))
    }

    pub fn is_closed(&self, g: &Graph) -> bool {
        self.end(g) == self.start
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        if !g.has_vertex(self.start) || self.darts.iter().any(|&d| !g.has_dart(d)) {
            return false;
        }
        let mut at = self.start;
        for &d in &self.darts {
            if g.src(d) != at {
                return false;
            }
            at = g.dst(d);
        }
        true
    }

    pub fn inverse(&self, g: &Graph) -> Path {
        Path { start: self.end(g), darts: self.darts.iter().rev().map(|&d| g.inv(d)).collect() }
    }

    /// Concatenation; the caller guarantees `self` ends where `other` starts.
    pub fn concat(&self, other: &Path) -> Path {
        let mut darts = self.darts.clone();
        darts.extend_from_slice(&other.darts);
        Path { start: self.start, darts }
    }

    /// Vertex visited after `i` darts.
    pub fn vertex_at(&self, g: &Graph, i: usize) -> VertexId {
        if i == 0 {
            self.start
        } else {
            g.dst(self.darts[i - 1])
        }
    }
}

/// An orientation: exactly one dart chosen per arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub chosen: BTreeSet<DartId>,
}

impl Orientation {
    /// The orientation consisting of forward darts.
    pub fn standard(g: &Graph) -> Self {
        Orientation { chosen: g.arcs().collect() }
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        g.darts().all(|d| self.chosen.contains(&d) != self.chosen.contains(&g.inv(d)))
            && self.chosen.iter().all(|&d| g.has_dart(d))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<VertexId>,
    pub darts: Vec<DartId>,
}

/// Component index of every vertex; components are numbered by their
/// smallest vertex.
pub fn component_labels(g: &Graph) -> Vec<usize> {
    let star = g.star();
    let mut label = vec![usize::MAX; g.num_vertices()];
    let mut next = 0;
    for v in g.vertices() {
        if label[v.0] != usize::MAX {
            continue;
        }
        label[v.0] = next;
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &d in &star[u.0] {
                let w = g.dst(d);
                if label[w.0] == usize::MAX {
                    label[w.0] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    label
}

/// Partition of the vertices into connected components, each carrying all
/// incident darts.
pub fn components(g: &Graph) -> Vec<Component> {
    let label = component_labels(g);
    let count = label.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![Component { vertices: Vec::new(), darts: Vec::new() }; count];
    for v in g.vertices() {
        out[label[v.0]].vertices.push(v);
    }
    for d in g.darts() {
        out[label[g.src(d).0]].darts.push(d);
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    g.num_vertices() > 0 && component_labels(g).iter().all(|&l| l == 0)
}

/// A spanning tree rooted at `root`, recording for each vertex the tree dart
/// arriving from its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: VertexId,
    pub parent: Vec<Option<DartId>>,
    pub depth: Vec<usize>,
    pub darts: BTreeSet<DartId>,
}

impl SpanningTree {
    pub fn contains(&self, d: DartId) -> bool {
        self.darts.contains(&d)
    }

    pub fn num_darts(&self) -> usize {
        self.darts.len()
    }

    /// The tree path from the root to `v`.
    pub fn path_from_root(&self, g: &Graph, v: VertexId) -> Path {
        let mut darts = Vec::new();
        let mut at = v;
        while let Some(d) = self.parent[at.0] {
            darts.push(d);
            at = g.src(d);
        }
        darts.reverse();
        Path { start: self.root, darts }
    }

    pub fn path_to_root(&self, g: &Graph, v: VertexId) -> Path {
        self.path_from_root(g, v).inverse(g)
    }

    /// The closed path root -> src(d), d, dst(d) -> root.
    pub fn generator_loop(&self, g: &Graph, d: DartId) -> Path {
        self.path_from_root(g, g.src(d)).concat(&Path::new(g.src(d), vec![d])).concat(&self.path_to_root(g, g.dst(d)))
    }
}

/// Layered spanning tree using lexicographic dart-name order.
pub fn spanning_tree(g: &Graph, root: VertexId) -> Result<SpanningTree, GraphError> {
    spanning_tree_by(g, root, |d| g.dart_name(d).to_string())
}

/// Layered spanning tree: every vertex at distance k+1 from the root is
/// joined by the minimal (under `key`) dart from a vertex at distance k.
pub fn spanning_tree_by<K: Ord>(
    g: &Graph,
    root: VertexId,
    key: impl Fn(DartId) -> K,
) -> Result<SpanningTree, GraphError> {
    if !g.has_vertex(root) {
        return Err(GraphError::UnknownVertex(root));
    }
    let star = g.star();
    let n = g.num_vertices();
    let mut parent: Vec<Option<DartId>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    depth[root.0] = 0;
    let mut layer = vec![root];
    let mut k = 0;
    while !layer.is_empty() {
        let mut best: BTreeMap<VertexId, (K, DartId)> = BTreeMap::new();
        for &u in &layer {
            for &d in &star[u.0] {
                let w = g.dst(d);
                if depth[w.0] != usize::MAX {
                    continue;
                }
                let kd = key(d);
                match best.get(&w) {
                    Some((kb, _)) if *kb <= kd => {}
                    _ => {
                        best.insert(w, (kd, d));
                    }
                }
            }
        }
        k += 1;
        layer = Vec::new();
        for (w, (_, d)) in best {
            depth[w.0] = k;
            parent[w.0] = Some(d);
            layer.push(w);
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(GraphError::NotConnected);
    }
    let mut darts = BTreeSet::new();
    for d in parent.iter().flatten() {
        darts.insert(*d);
        darts.insert(g.inv(*d));
    }
    Ok(SpanningTree { root, parent, depth, darts })
}

/// Result of a graph quotient: the quotient graph and the quotient map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphQuotient {
    pub graph: Graph,
    pub vmap: Vec<VertexId>,
    pub dmap: Vec<DartImage>,
}

/// Union-find over the cells of a graph whose closure propagates `src` and
/// `inv`, so that the final relation is the smallest quotient-closed
/// relation containing the generating pairs.
#[derive(Clone, Debug)]
pub(crate) struct GraphRelation<'a> {
    g: &'a Graph,
    parent: Vec<usize>,
}

impl<'a> GraphRelation<'a> {
    pub fn new(g: &'a Graph) -> Self {
        GraphRelation { g, parent: (0..g.num_vertices() + g.num_darts()).collect() }
    }

    fn index(&self, c: GraphCell) -> usize {
        match c {
            GraphCell::Vertex(v) => v.0,
            GraphCell::Dart(d) => self.g.num_vertices() + d.0,
        }
    }

    fn cell(&self, i: usize) -> GraphCell {
        let nv = self.g.num_vertices();
        if i < nv {
            GraphCell::Vertex(VertexId(i))
        } else {
            GraphCell::Dart(DartId(i - nv))
        }
    }

    fn s(&self, i: usize) -> usize {
        match self.cell(i) {
            GraphCell::Vertex(_) => i,
            GraphCell::Dart(d) => self.g.src(d).0,
        }
    }

    fn i(&self, i: usize) -> usize {
        match self.cell(i) {
            GraphCell::Vertex(_) => i,
            GraphCell::Dart(d) => self.g.num_vertices() + self.g.inv(d).0,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn relate(&mut self, a: GraphCell, b: GraphCell) {
        let mut work = vec![(self.index(a), self.index(b))];
        while let Some((x, y)) = work.pop() {
            let (rx, ry) = (self.find(x), self.find(y));
            if rx == ry {
                continue;
            }
            let (lo, hi) = (rx.min(ry), rx.max(ry));
            self.parent[hi] = lo;
            work.push((self.s(x), self.s(y)));
            work.push((self.i(x), self.i(y)));
        }
    }

    /// Builds the quotient graph, naming each class after its
    /// lexicographically least member.
    pub fn finish(mut self) -> Result<GraphQuotient, GraphError> {
        let g = self.g;
        let nv = g.num_vertices();
        let total = nv + g.num_darts();
        let roots: Vec<usize> = (0..total).map(|i| self.find(i)).collect();
        // class -> vertex representative, if the class meets X^0
        let mut has_vertex: HashMap<usize, VertexId> = HashMap::new();
        for v in g.vertices() {
            let r = roots[v.0];
            let name_better = |cur: &VertexId| g.vertex_name(v) < g.vertex_name(*cur);
            match has_vertex.get(&r) {
                Some(cur) if !name_better(cur) => {}
                _ => {
                    has_vertex.insert(r, v);
                }
            }
        }
        for d in g.darts() {
            let r = roots[nv + d.0];
            let ri = roots[nv + g.inv(d).0];
            if r == ri && !has_vertex.contains_key(&r) {
                return Err(GraphError::NotQuotientRelation(g.dart_name(d).to_string()));
            }
        }
        let mut out = Graph::new();
        let mut vclass: BTreeMap<usize, VertexId> = BTreeMap::new();
        // order vertex classes by least member id
        let mut vreps: Vec<(usize, VertexId)> = Vec::new();
        for v in g.vertices() {
            let r = roots[v.0];
            if !vreps.iter().any(|(rr, _)| *rr == r) {
                vreps.push((r, v));
            }
        }
        for (r, _) in &vreps {
            let name = g.vertex_name(has_vertex[r]);
            let id = out.add_vertex(name).expect("class names are distinct");
            vclass.insert(*r, id);
        }
        let mut dclass: HashMap<usize, DartId> = HashMap::new();
        for d in g.darts() {
            let r = roots[nv + d.0];
            if has_vertex.contains_key(&r) || dclass.contains_key(&r) {
                continue;
            }
            let ri = roots[nv + g.inv(d).0];
            // least forward-dart name across the two classes decides direction
            let mut best: Option<(&str, usize)> = None;
            for e in g.darts() {
                let re = roots[nv + e.0];
                if (re == r || re == ri) && g.is_forward(e) {
                    let n = g.dart_name(e);
                    if best.is_none_or(|(b, _)| n < b) {
                        best = Some((n, re));
                    }
                }
            }
            let (name, fwd_root) = best.expect("every class holds a forward dart or its inverse");
            let back_root = if fwd_root == r { ri } else { r };
            let rep = g.darts().find(|&e| roots[nv + e.0] == fwd_root).expect("class is nonempty");
            let s = vclass[&roots[g.src(rep).0]];
            let t = vclass[&roots[g.dst(rep).0]];
            let fd = out.add_edge(name, s, t).expect("class names are distinct");
            dclass.insert(fwd_root, fd);
            dclass.insert(back_root, out.inv(fd));
        }
        let vmap = g.vertices().map(|v| vclass[&roots[v.0]]).collect();
        let dmap = g
            .darts()
            .map(|d| {
                let r = roots[nv + d.0];
                match has_vertex.get(&r) {
                    Some(_) => DartImage::Vertex(vclass[&r]),
                    None => DartImage::Dart(dclass[&r]),
                }
            })
            .collect();
        Ok(GraphQuotient { graph: out, vmap, dmap })
    }
}

/// Quotient by the smallest quotient relation containing `pairs`.
pub fn quotient_graph(g: &Graph, pairs: &[(GraphCell, GraphCell)]) -> Result<GraphQuotient, GraphError> {
    let mut rel = GraphRelation::new(g);
    for &(a, b) in pairs {
        match a {
            GraphCell::Vertex(v) if !g.has_vertex(v) => return Err(GraphError::UnknownVertex(v)),
            GraphCell::Dart(d) if !g.has_dart(d) => return Err(GraphError::UnknownDart(d)),
            _ => {}
        }
        match b {
            GraphCell::Vertex(v) if !g.has_vertex(v) => return Err(GraphError::UnknownVertex(v)),
            GraphCell::Dart(d) if !g.has_dart(d) => return Err(GraphError::UnknownDart(d)),
            _ => {}
        }
        rel.relate(a, b);
    }
    rel.finish()
}

/// Replaces the arc of `d` by two arcs through a new middle vertex. Existing
/// ids are preserved: `d` becomes the first half, the second half is
/// appended.
pub fn subdivide_edge(g: &Graph, d: DartId) -> Result<Graph, GraphError> {
    subdivide_edge_tracked(g, d).map(|(g, _, _)| g)
}

/// As [`subdivide_edge`], also returning the new vertex and the forward dart
/// of the new second half (oriented like `d`).
pub fn subdivide_edge_tracked(g: &Graph, d: DartId) -> Result<(Graph, VertexId, DartId), GraphError> {
    if !g.has_dart(d) {
        return Err(GraphError::UnknownDart(d));
    }
    let mut out = g.clone();
    let t = g.dst(d);
    let base = mangle(g.dart_name(d));
    let mid = out.add_vertex(g.fresh_vertex_name(&format!("{base}_m")))?;
    out.src[g.inv(d).0] = mid;
    let second = out.add_edge(g.fresh_arc_name(&format!("{base}_b")), mid, t)?;
    Ok((out, mid, second))
}

/// Inverse of subdivision at a valency-2 vertex whose two darts belong to
/// different arcs.
pub fn smooth_vertex(g: &Graph, v: VertexId) -> Result<Graph, GraphError> {
    if !g.has_vertex(v) {
        return Err(GraphError::UnknownVertex(v));
    }
    let star = g.darts_from(v);
    if star.len() != 2 || star[1] == g.inv(star[0]) {
        return Err(GraphError::NotSmoothable(g.vertex_name(v).to_string()));
    }
    let (x, y) = (star[0], star[1]);
    // arc of x survives as dst(y) -> dst(x); arc of y is removed
    let b = g.dst(y);
    let mut out = Graph::new();
    let mut vnew = vec![None; g.num_vertices()];
    for u in g.vertices() {
        if u != v {
            vnew[u.0] = Some(out.add_vertex(g.vertex_name(u))?);
        }
    }
    for d in g.arcs() {
        if d == y || d == g.inv(y) {
            continue;
        }
        let mut s = g.src(d);
        let mut t = g.dst(d);
        if d == x {
            s = b;
        }
        if g.inv(d) == x {
            t = b;
        }
        out.add_edge(g.dart_name(d), vnew[s.0].unwrap(), vnew[t.0].unwrap())?;
    }
    Ok(out)
}

/// Smooths valency-2 vertices until none remain, except the single vertex
/// left on a component that is a cycle.
pub fn topological_normal_form(g: &Graph) -> Graph {
    let mut cur = g.clone();
    loop {
        let candidate = cur.vertices().find(|&v| {
            let s = cur.darts_from(v);
            s.len() == 2 && s[1] != cur.inv(s[0])
        });
        match candidate {
            Some(v) => cur = smooth_vertex(&cur, v).expect("candidate is smoothable"),
            None => return cur,
        }
    }
}

/// A graph isomorphism as vertex and dart tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphIso {
    pub vmap: Vec<VertexId>,
    pub dmap: Vec<DartId>,
}

/// Enumerates graph isomorphisms `a -> b`, calling `visit` for each until it
/// returns `true`. Returns whether enumeration was stopped by `visit`.
pub fn for_each_graph_isomorphism(a: &Graph, b: &Graph, mut visit: impl FnMut(&GraphIso) -> bool) -> bool {
    if a.num_vertices() != b.num_vertices() || a.num_darts() != b.num_darts() {
        return false;
    }
    let mut va: Vec<usize> = a.vertices().map(|v| a.valency(v)).collect();
    let vb: Vec<usize> = b.vertices().map(|v| b.valency(v)).collect();
    {
        let mut sa = va.clone();
        let mut sb = vb.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return false;
        }
    }
    va.shrink_to_fit();
    let mut st = IsoSearch {
        a,
        b,
        star_b: b.star(),
        val_a: va,
        val_b: vb,
        vmap: vec![None; a.num_vertices()],
        vused: vec![false; b.num_vertices()],
        dmap: vec![None; a.num_darts()],
        dused: vec![false; b.num_darts()],
    };
    st.search(&mut visit)
}

struct IsoSearch<'a> {
    a: &'a Graph,
    b: &'a Graph,
    star_b: Vec<Vec<DartId>>,
    val_a: Vec<usize>,
    val_b: Vec<usize>,
    vmap: Vec<Option<VertexId>>,
    vused: Vec<bool>,
    dmap: Vec<Option<DartId>>,
    dused: Vec<bool>,
}

impl IsoSearch<'_> {
    fn search(&mut self, visit: &mut dyn FnMut(&GraphIso) -> bool) -> bool {
        // next dart at a mapped vertex
        let next = self.a.darts().find(|&d| self.dmap[d.0].is_none() && self.vmap[self.a.src(d).0].is_some());
        if let Some(d) = next {
            let u = self.vmap[self.a.src(d).0].unwrap();
            let candidates = self.star_b[u.0].clone();
            let di = self.a.inv(d);
            let is_loop = self.a.src(d) == self.a.dst(d);
            for e in candidates {
                if self.dused[e.0] {
                    continue;
                }
                let ei = self.b.inv(e);
                if (self.b.src(e) == self.b.dst(e)) != is_loop || self.dused[ei.0] {
                    continue;
                }
                let t = self.a.dst(d);
                let te = self.b.dst(e);
                let fresh_vertex = match self.vmap[t.0] {
                    Some(m) if m != te => continue,
                    Some(_) => false,
                    None => {
                        if self.vused[te.0] || self.val_a[t.0] != self.val_b[te.0] {
                            continue;
                        }
                        true
                    }
                };
                if fresh_vertex {
                    self.vmap[t.0] = Some(te);
                    self.vused[te.0] = true;
                }
                self.dmap[d.0] = Some(e);
                self.dmap[di.0] = Some(ei);
                self.dused[e.0] = true;
                self.dused[ei.0] = true;
                if self.search(visit) {
                    return true;
                }
                self.dmap[d.0] = None;
                self.dmap[di.0] = None;
                self.dused[e.0] = false;
                self.dused[ei.0] = false;
                if fresh_vertex {
                    self.vmap[t.0] = None;
                    self.vused[te.0] = false;
                }
            }
            return false;
        }
        let unmapped = self.a.vertices().find(|&v| self.vmap[v.0].is_none());
        match unmapped {
            None => {
                let iso = GraphIso {
                    vmap: self.vmap.iter().map(|v| v.unwrap()).collect(),
                    dmap: self.dmap.iter().map(|d| d.unwrap()).collect(),
                };
                visit(&iso)
            }
            Some(v) => {
                for w in self.b.vertices() {
                    if self.vused[w.0] || self.val_a[v.0] != self.val_b[w.0] {
                        continue;
                    }
                    self.vmap[v.0] = Some(w);
                    self.vused[w.0] = true;
                    if self.search(visit) {
                        return true;
                    }
                    self.vmap[v.0] = None;
                    self.vused[w.0] = false;
                }
                false
            }
        }
    }
}

pub fn graph_isomorphism(a: &Graph, b: &Graph) -> Option<GraphIso> {
    let mut found = None;
    for_each_graph_isomorphism(a, b, |iso| {
        found = Some(iso.clone());
        true
    });
    found
}

/// Homeomorphism of finite graphs, decided on topological normal forms.
pub fn is_homeomorphic(a: &Graph, b: &Graph) -> bool {
    let na = topological_normal_form(a);
    let nb = topological_normal_form(b);
    graph_isomorphism(&na, &nb).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> Graph {
        let mut g = Graph::new();
        let vs: Vec<_> = (0..n).map(|i| g.add_vertex(format!("v{i}")).unwrap()).collect();
        for i in 0..n {
            g.add_edge(format!("e{i}"), vs[i], vs[(i + 1) % n]).unwrap();
        }
        g
    }

    fn loop1() -> Graph {
        cycle(1)
    }

    fn theta() -> Graph {
        let mut g = Graph::new();
        let a = g.add_vertex("a").unwrap();
        let b = g.add_vertex("b").unwrap();
        for i in 0..3 {
            g.add_edge(format!("t{i}"), a, b).unwrap();
        }
        g
    }

    fn interval() -> Graph {
        let mut g = Graph::new();
        let a = g.add_vertex("a").unwrap();
        let b = g.add_vertex("b").unwrap();
        g.add_edge("e", a, b).unwrap();
        g
    }

    #[test]
    fn trivial_and_loop_graphs_validate() {
        let mut g = Graph::new();
        g.add_vertex("v").unwrap();
        assert!(validate_graph(&g).is_valid());
        assert!(validate_graph(&loop1()).is_valid());
    }

    #[test]
    fn fixed_point_involution_is_reported() {
        let g = Graph::from_raw(vec!["v".into()], vec!["e".into()], vec![0], vec![0]);
        let r = validate_graph(&g);
        assert!(r.violations.iter().any(|v| v.contains("involution fixed point on dart")));
    }

    #[test]
    fn dangling_tables_are_reported() {
        let g = Graph::from_raw(vec!["v".into()], vec!["e".into(), "e^".into()], vec![0, 3], vec![1, 7]);
        let r = validate_graph(&g);
        assert!(r.violations.iter().any(|v| v.contains("missing src")));
        assert!(r.violations.iter().any(|v| v.contains("dangling inverse")));
    }

    #[test]
    fn component_counts() {
        assert_eq!(components(&loop1()).len(), 1);
        let mut g = loop1();
        g.add_vertex("w").unwrap();
        assert_eq!(components(&g).len(), 2);
        let c = components(&cycle(6));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].vertices.len(), 6);
        assert_eq!(c[0].darts.len(), 12);
    }

    #[test]
    fn spanning_tree_examples() {
        let t = spanning_tree(&loop1(), VertexId(0)).unwrap();
        assert_eq!(t.num_darts(), 0);
        let g = cycle(4);
        let t = spanning_tree(&g, VertexId(0)).unwrap();
        assert_eq!(t.num_darts(), 6);
        assert_eq!(t.num_darts(), 2 * (g.num_vertices() - 1));

        let mut g = Graph::new();
        let u = g.add_vertex("u").unwrap();
        let w = g.add_vertex("w").unwrap();
        let b = g.add_edge("b", u, w).unwrap();
        let a = g.add_edge("a", u, w).unwrap();
        let t = spanning_tree(&g, u).unwrap();
        assert!(t.contains(a) && !t.contains(b));
    }

    #[test]
    fn spanning_tree_requires_connected() {
        let mut g = loop1();
        g.add_vertex("w").unwrap();
        assert_eq!(spanning_tree(&g, VertexId(0)), Err(GraphError::NotConnected));
    }

    #[test]
    fn quotient_examples() {
        let g = cycle(3);
        let q = quotient_graph(&g, &[]).unwrap();
        assert!(graph_isomorphism(&g, &q.graph).is_some());

        let g = interval();
        let e = g.dart_by_name("e").unwrap();
        let err = quotient_graph(&g, &[(GraphCell::Dart(e), GraphCell::Dart(g.inv(e)))]);
        assert!(matches!(err, Err(GraphError::NotQuotientRelation(_))));

        let g = cycle(2);
        let q = quotient_graph(&g, &[(GraphCell::Vertex(VertexId(0)), GraphCell::Vertex(VertexId(1)))]).unwrap();
        assert_eq!(q.graph.num_vertices(), 1);
        assert_eq!(q.graph.num_arcs(), 2);
        assert!(q.graph.darts().all(|d| q.graph.src(d) == q.graph.dst(d)));
    }

    #[test]
    fn subdivision_examples() {
        let g = subdivide_edge(&loop1(), DartId(0)).unwrap();
        assert!(validate_graph(&g).is_valid());
        assert!(graph_isomorphism(&g, &cycle(2)).is_some());
        let g = subdivide_edge(&cycle(2), DartId(0)).unwrap();
        assert!(graph_isomorphism(&g, &cycle(3)).is_some());
        let back = smooth_vertex(&g, VertexId(2)).unwrap();
        assert!(graph_isomorphism(&back, &cycle(2)).is_some());
        assert_eq!(subdivide_edge(&cycle(2), DartId(9)), Err(GraphError::UnknownDart(DartId(9))));
    }

    #[test]
    fn normal_forms() {
        let n = topological_normal_form(&cycle(6));
        assert_eq!((n.num_vertices(), n.num_arcs()), (1, 1));
        let n = topological_normal_form(&interval());
        assert!(graph_isomorphism(&n, &interval()).is_some());
        let n = topological_normal_form(&theta());
        assert!(graph_isomorphism(&n, &theta()).is_some());
    }

    #[test]
    fn homeomorphism_examples() {
        assert!(is_homeomorphic(&cycle(4), &cycle(7)));
        assert!(!is_homeomorphic(&loop1(), &interval()));
        assert!(!is_homeomorphic(&theta(), &cycle(3)));
    }
}
