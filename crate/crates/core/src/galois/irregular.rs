//! Complete irregularity through the self-pullback.

use std::collections::BTreeSet;

use crate::constructions::pullback;
use crate::covering::CoveringCert;
use crate::error::GaloisError;
use crate::graph::component_labels;
use crate::map::ComplexMap;

/// For a dimension-preserving map of graphs `f: Y -> X`: every component of
/// the pullback of `f` with itself, other than those through the diagonal,
/// is a tree. For a connected `Y` immersed in `X` this says that the lift
/// of a nontrivial closed path at one vertex is never closed at another
/// vertex of the same fibre.
pub fn is_completely_irregular_map(f: &ComplexMap) -> Result<bool, GaloisError> {
    if !f.source.is_graph() || !f.target.is_graph() {
        return Err(GaloisError::NotGraph);
    }
    let pb = pullback(f, f)?;
    let g = pb.complex.graph();
    let labels = component_labels(g);
    let diagonal: BTreeSet<usize> =
        f.source.graph().vertices().filter_map(|v| pb.vertex(v, v)).map(|p| labels[p.0]).collect();
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut vertices = vec![0usize; count];
    let mut arcs = vec![0usize; count];
    for v in g.vertices() {
        vertices[labels[v.0]] += 1;
    }
    for a in g.arcs() {
        arcs[labels[g.src(a).0]] += 1;
    }
    Ok((0..count).filter(|l| !diagonal.contains(l)).all(|l| arcs[l] + 1 == vertices[l]))
}

/// [`is_completely_irregular_map`] for a certified graph covering. A finite
/// covering of a graph with a cycle is completely irregular only when it has
/// degree one.
pub fn is_completely_irregular(c: &CoveringCert) -> Result<bool, GaloisError> {
    is_completely_irregular_map(c.map())
}
