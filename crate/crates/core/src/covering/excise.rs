//! Collapsing a simply connected subcomplex of the base and its lifts.

use std::sync::Arc;

use super::{check_covering, CoveringCert};
use crate::complex::{Subcomplex, TwoComplex};
use crate::constructions::quotient_by_subcomplexes;
use crate::error::{ConstructionError, CoveringError};
use crate::graph::{component_labels, is_connected, spanning_tree};
use crate::homotopy::{null_homotopic, HomotopyBounds, HomotopyVerdict};
use crate::map::{compose_maps, factor_through_quotient, ComplexMap};

#[derive(Clone, Debug)]
pub struct Excision {
    /// `X -> X/Z`.
    pub base_quotient: ComplexMap,
    /// `Y -> Y/f⁻¹(Z)`, collapsing each lift of `Z` separately.
    pub cover_quotient: ComplexMap,
    /// The induced covering `Y/f⁻¹(Z) -> X/Z`.
    pub cover: CoveringCert,
    /// The lifts of `Z`.
    pub lifts: Vec<Subcomplex>,
}

/// Decides whether a connected complex is simply connected by contracting
/// its generator loops within the bounds.
pub fn is_simply_connected(z: &TwoComplex, bounds: HomotopyBounds) -> Result<(), CoveringError> {
    let g = z.graph();
    if !is_connected(g) {
        return Err(CoveringError::NotConnected);
    }
    let root = g.vertices().next().expect("connected graphs are nonempty");
    let tree = spanning_tree(g, root)?;
    for a in g.arcs().filter(|d| !tree.contains(*d)) {
        let gamma = tree.generator_loop(g, a);
        let name = g.path_name(&gamma);
        match null_homotopic(z, &gamma, bounds) {
            Ok(HomotopyVerdict::Proven(_)) => {}
            Ok(HomotopyVerdict::Refuted(_)) => return Err(CoveringError::NotSimplyConnected(name)),
            Ok(HomotopyVerdict::Inconclusive(_)) => return Err(CoveringError::Inconclusive(name)),
            Err(e) => return Err(CoveringError::Inconclusive(format!("{name}: {e}"))),
        }
    }
    Ok(())
}

/// Excises a connected, simply connected subcomplex `z` of the base: the
/// covering descends to a covering of `X/Z` by `Y` with every lift of `Z`
/// collapsed to its own vertex.
pub fn excise(c: &CoveringCert, z: &Subcomplex, bounds: HomotopyBounds) -> Result<Excision, CoveringError> {
    let x = c.target();
    if !z.is_subcomplex_of(x) || z.vertices.is_empty() {
        return Err(ConstructionError::NotSubcomplex("excised part".to_string()).into());
    }
    let (zc, _, _, _) = z.to_complex(x);
    is_simply_connected(&zc, bounds)?;

    let f = c.map();
    let y = c.source();
    let pre = Subcomplex {
        vertices: z.vertices.iter().flat_map(|v| c.vertex_fiber(*v).iter().copied()).collect(),
        darts: z.darts.iter().flat_map(|d| c.dart_fiber(*d).iter().copied()).collect(),
        faces: z.faces.iter().flat_map(|s| c.face_fiber(*s).iter().copied()).collect(),
    };
    let (pc, vold, _, _) = pre.to_complex(y);
    let labels = component_labels(pc.graph());
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut lifts = vec![Subcomplex::default(); count];
    let mut label_of = vec![usize::MAX; y.num_vertices()];
    for (i, &l) in labels.iter().enumerate() {
        label_of[vold[i].0] = l;
        lifts[l].vertices.insert(vold[i]);
    }
    for &d in &pre.darts {
        lifts[label_of[y.graph().src(d).0]].darts.insert(d);
    }
    for &s in &pre.faces {
        lifts[label_of[y.graph().src(y.boundary(s)[0]).0]].faces.insert(s);
    }
    let zcounts = (z.vertices.len(), z.darts.len(), z.faces.len());
    for l in &lifts {
        if (l.vertices.len(), l.darts.len(), l.faces.len()) != zcounts {
            return Err(CoveringError::NotSimplyConnected("lifts are not copies".to_string()));
        }
    }
    let (_, mut qx) = quotient_by_subcomplexes(x, std::slice::from_ref(z))?;
    qx.source = x.clone();
    let (_, mut qy) = quotient_by_subcomplexes(y, &lifts)?;
    qy.source = y.clone();
    let down = compose_maps(&qx, f)?;
    let induced = factor_through_quotient(&qy, &down)?;
    let cover = check_covering(&induced)?;
    Ok(Excision { base_quotient: qx, cover_quotient: qy, cover, lifts })
}

impl Excision {
    pub fn base(&self) -> &Arc<TwoComplex> {
        &self.base_quotient.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::{DartId, DartImage, VertexId};

    #[test]
    fn excising_a_vertex_changes_nothing() {
        let c = check_covering(&corpus::cyc_cover(6)).unwrap();
        let z = Subcomplex::from_names(c.target(), &["v"]).unwrap();
        let e = excise(&c, &z, HomotopyBounds::default()).unwrap();
        assert_eq!(e.cover.degree(), 6);
        assert_eq!(e.lifts.len(), 6);
    }

    #[test]
    fn excising_an_arc() {
        let f = ComplexMap::from_forward(
            Arc::new(corpus::cyc(6)),
            Arc::new(corpus::cyc(3)),
            (0..6).map(|i| VertexId(i % 3)).collect(),
            |d| DartImage::Dart(DartId(2 * ((d.0 / 2) % 3))),
            |_| unreachable!(),
        );
        let c = check_covering(&f).unwrap();
        let z = Subcomplex::from_names(c.target(), &["a0"]).unwrap();
        let e = excise(&c, &z, HomotopyBounds::default()).unwrap();
        assert_eq!(e.cover.degree(), 2);
        assert_eq!(e.base().counts(), (2, 2, 0));
        assert_eq!(e.cover.source().counts(), (4, 4, 0));
        assert_eq!(e.lifts.len(), 2);
    }

    #[test]
    fn loops_are_not_excisable() {
        let c = check_covering(&corpus::cyc_cover(3)).unwrap();
        let z = Subcomplex::from_names(c.target(), &["a"]).unwrap();
        assert!(matches!(excise(&c, &z, HomotopyBounds::default()), Err(CoveringError::NotSimplyConnected(_))));
    }

    #[test]
    fn cyclic_two_complex_is_not_excisable() {
        let c = check_covering(&corpus::hexagon_cover(3)).unwrap();
        let z = Subcomplex::from_names(c.target(), &["h"]).unwrap();
        assert!(excise(&c, &z, HomotopyBounds::default()).is_err());
    }
}
