//! Covers assembled from coset tables, including the universal cover.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use super::presentation::{coset_enumerate, ComplexPresentation, CosetTable, Letter};
use super::{check_covering, CoveringCert};
use crate::complex::TwoComplex;
use crate::error::CoveringError;
use crate::graph::{mangle, DartId, DartImage, Graph, VertexId};
use crate::map::{ComplexMap, FaceImage};

fn step(cp: &ComplexPresentation, table: &CosetTable, coset: usize, d: DartId) -> Option<usize> {
    match cp.letter(d) {
        None => Some(coset),
        Some(l) => table.act(coset, l),
    }
}

/// A lifted complex with the base cell under each vertex and dart, and the
/// base face and coset under each face.
type Assembled = (TwoComplex, Vec<VertexId>, Vec<DartId>, Vec<(crate::complex::FaceId, usize)>);

/// Lifts of vertices, arcs and faces of `cp.complex` over the given cosets.
/// A lift `(cell, i)` is kept when all of its cells are defined.
fn assemble(cp: &ComplexPresentation, table: &CosetTable, cosets: &[usize]) -> Result<Assembled, CoveringError> {
    let x = &*cp.complex;
    let xg = x.graph();
    let nv = xg.num_vertices();
    let mut index = vec![usize::MAX; table.len()];
    for (k, &c) in cosets.iter().enumerate() {
        index[c] = k;
    }
    let mut g = Graph::new();
    let mut vimg = Vec::new();
    for &c in cosets {
        for w in xg.vertices() {
            g.add_vertex(format!("{}.{c}", xg.vertex_name(w)))?;
            vimg.push(w);
        }
    }
    let vid = |w: VertexId, c: usize| VertexId(index[c] * nv + w.0);
    let mut dimg = Vec::new();
    for &c in cosets {
        for a in xg.arcs() {
            let Some(t) = step(cp, table, c, a) else { continue };
            if index.get(t).copied().unwrap_or(usize::MAX) == usize::MAX {
                continue;
            }
            g.add_edge(format!("{}.{c}", mangle(xg.dart_name(a))), vid(xg.src(a), c), vid(xg.dst(a), t))?;
            dimg.push(a);
        }
    }
    // dart lookup by (source vertex, base dart)
    let mut lift = std::collections::HashMap::new();
    for d in g.darts() {
        let base = if g.is_forward(d) { dimg[d.0 / 2] } else { xg.inv(dimg[d.0 / 2]) };
        lift.insert((g.src(d), base), d);
    }
    let mut y = TwoComplex::from_graph(g);
    let mut fimg = Vec::new();
    for &c in cosets {
        for f in x.canonical_faces() {
            let b = x.boundary(f);
            let start = vid(xg.src(b[0]), c);
            let mut at = start;
            let mut darts = Vec::with_capacity(b.len());
            for &e in b {
                match lift.get(&(at, e)) {
                    Some(&d) => {
                        darts.push(d);
                        at = y.graph().dst(d);
                    }
                    None => break,
                }
            }
            if darts.len() < b.len() {
                continue;
            }
            if at != start {
                return Err(CoveringError::RelatorViolation(x.face_name(f).to_string()));
            }
            y.add_face(format!("{}.{c}", x.face_name(f)), darts)?;
            fimg.push((f, 0));
        }
    }
    Ok((y, vimg, dimg, fimg))
}

fn covering_map(
    cp: &ComplexPresentation,
    y: TwoComplex,
    vimg: Vec<VertexId>,
    dimg: Vec<DartId>,
    fimg: Vec<(crate::complex::FaceId, usize)>,
) -> ComplexMap {
    ComplexMap::from_forward(
        Arc::new(y),
        cp.complex.clone(),
        vimg,
        |d| DartImage::Dart(dimg[d.0 / 2]),
        |f| {
            let (face, offset) = fimg[f.0 / 2];
            FaceImage::Face { face, offset }
        },
    )
}

/// The cover of `cp.complex` whose fibre over the base vertex is the set of
/// cosets in a closed table. Vertex `w.i` is the end of the lift of the tree
/// path to `w` starting at coset `i`.
pub fn bottom_up_cover(cp: &ComplexPresentation, table: &CosetTable) -> Result<CoveringCert, CoveringError> {
    if !table.is_closed() || table.num_generators != cp.generators.len() {
        return Err(CoveringError::TableNotClosed);
    }
    let cosets: Vec<usize> = (0..table.len()).collect();
    let (y, vimg, dimg, fimg) = assemble(cp, table, &cosets)?;
    if fimg.len() != cosets.len() * cp.complex.num_face_pairs() {
        return Err(CoveringError::TableNotClosed);
    }
    check_covering(&covering_map(cp, y, vimg, dimg, fimg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniversalBounds {
    pub max_cosets: usize,
    /// Radius of the ball kept when the enumeration does not close.
    pub radius: usize,
}

impl Default for UniversalBounds {
    fn default() -> Self {
        UniversalBounds { max_cosets: super::DEFAULT_MAX_COSETS, radius: 3 }
    }
}

/// A finite piece of an infinite (or too large) universal cover.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub radius: usize,
    pub map: ComplexMap,
    /// Vertices over the base at the outer radius.
    pub frontier: Vec<VertexId>,
}

impl Truncation {
    pub fn complex(&self) -> &Arc<TwoComplex> {
        &self.map.source
    }
}

#[derive(Clone, Debug)]
pub enum UniversalCover {
    Cover(CoveringCert),
    Truncated(Truncation),
}

/// The universal cover: the cover for the trivial subgroup. When the coset
/// enumeration does not close within the bound, the ball of the given radius
/// around the base coset is returned instead, with the faces whose boundary
/// lies in the ball.
pub fn universal_cover(
    x: &Arc<TwoComplex>,
    base: VertexId,
    bounds: UniversalBounds,
) -> Result<UniversalCover, CoveringError> {
    let cp = ComplexPresentation::new(x.clone(), base)?;
    let table = coset_enumerate(&cp.presentation, &[], bounds.max_cosets)?;
    if table.is_closed() {
        return bottom_up_cover(&cp, &table).map(UniversalCover::Cover);
    }
    let mut dist = vec![usize::MAX; table.len()];
    dist[0] = 0;
    let mut order = vec![0];
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        if dist[c] == bounds.radius {
            continue;
        }
        for g in 0..table.num_generators {
            for inv in [false, true] {
                if let Some(t) = table.act(c, Letter::new(g, inv)) {
                    if dist[t] == usize::MAX {
                        dist[t] = dist[c] + 1;
                        order.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
    }
    let (y, vimg, dimg, fimg) = assemble(&cp, &table, &order)?;
    let nv = x.num_vertices();
    let frontier: BTreeSet<VertexId> = order
        .iter()
        .enumerate()
        .filter(|(_, c)| dist[**c] == bounds.radius)
        .map(|(k, _)| VertexId(k * nv + base.0))
        .collect();
    let map = covering_map(&cp, y, vimg, dimg, fimg);
    Ok(UniversalCover::Truncated(Truncation { radius: bounds.radius, map, frontier: frontier.into_iter().collect() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::map::{are_isomorphic, validate_map};

    #[test]
    fn torus_double_cover() {
        let x = Arc::new(corpus::torus());
        let cp = ComplexPresentation::new(x, VertexId(0)).unwrap();
        let p = &cp.presentation;
        let h = vec![p.parse_word("a a").unwrap(), p.parse_word("b").unwrap()];
        let t = coset_enumerate(p, &h, 100).unwrap();
        let c = bottom_up_cover(&cp, &t).unwrap();
        assert_eq!(c.degree(), 2);
        assert_eq!(c.source().euler_characteristic(), 0);
    }

    #[test]
    fn cyclic_cover_from_free_group() {
        let x = Arc::new(corpus::loop1());
        let cp = ComplexPresentation::new(x, VertexId(0)).unwrap();
        let h = cp.presentation.parse_word("a a a").unwrap();
        let t = coset_enumerate(&cp.presentation, &[h], 100).unwrap();
        let c = bottom_up_cover(&cp, &t).unwrap();
        assert!(are_isomorphic(c.source(), &Arc::new(corpus::cyc(3))));
    }

    #[test]
    fn universal_cover_of_projective_plane() {
        let x = Arc::new(corpus::rp2());
        match universal_cover(&x, VertexId(0), UniversalBounds::default()).unwrap() {
            UniversalCover::Cover(c) => {
                assert_eq!(c.degree(), 2);
                assert!(are_isomorphic(c.source(), &Arc::new(corpus::sph2())));
            }
            UniversalCover::Truncated(_) => panic!("finite group"),
        }
    }

    #[test]
    fn universal_cover_of_lens_space_presentation() {
        let x = Arc::new(corpus::cyclic_presentation(5));
        let UniversalCover::Cover(c) = universal_cover(&x, VertexId(0), UniversalBounds::default()).unwrap() else {
            panic!("finite group")
        };
        assert_eq!(c.degree(), 5);
    }

    #[test]
    fn torus_ball() {
        let x = Arc::new(corpus::torus());
        let b = UniversalBounds { max_cosets: 2000, radius: 2 };
        let UniversalCover::Truncated(t) = universal_cover(&x, VertexId(0), b).unwrap() else {
            panic!("infinite group")
        };
        assert_eq!(t.complex().num_vertices(), 13);
        assert_eq!(t.frontier.len(), 8);
        assert!(validate_map(&t.map).is_valid());
        // unit squares inside the diamond
        assert_eq!(t.complex().num_face_pairs(), 4);
    }
}
