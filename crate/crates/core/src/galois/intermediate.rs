//! Intermediate covers `Y -> Z -> X` of a fixed covering.

use super::GaloisGroup;
use crate::constructions::{quotient_by_group_action, GroupAction};
use crate::covering::{check_covering, CoveringCert};
use crate::error::GaloisError;
use crate::graph::VertexId;
use crate::map::{compose_maps, factor_through_quotient, is_isomorphism, maps_agree, same_complex, ComplexMap};
use crate::permgroup::PermGroup;

/// A factorization of a covering into coverings `upper: Y -> Z` and
/// `lower: Z -> X`, pointed at a vertex of `Y`.
#[derive(Clone, Debug)]
pub struct IntermediateCover {
    pub upper: CoveringCert,
    pub lower: CoveringCert,
    pub base: VertexId,
}

impl IntermediateCover {
    /// Degree of `Z -> X`.
    pub fn degree(&self) -> usize {
        self.lower.degree()
    }

    pub fn complex(&self) -> &std::sync::Arc<crate::complex::TwoComplex> {
        self.upper.target()
    }

    /// The composite `Y -> X`.
    pub fn composite(&self) -> Result<ComplexMap, GaloisError> {
        Ok(compose_maps(self.lower.map(), self.upper.map())?)
    }
}

/// `Y -> Y/H -> X` for a subgroup `H` of the Galois group, given by its
/// action on vertices.
pub fn quotient_by_deck_subgroup(g: &GaloisGroup, h: &PermGroup) -> Result<IntermediateCover, GaloisError> {
    if h.degree() != g.perm_rep().degree() || !h.is_subgroup_of(g.perm_rep()) {
        return Err(GaloisError::NotSubgroup);
    }
    let c = g.cert();
    let y = c.source().clone();
    let elements: Vec<ComplexMap> =
        h.elements().iter().map(|p| g.element(p).expect("subgroup elements are deck transforms").map.clone()).collect();
    let action = GroupAction { complex: y.clone(), generators: elements.clone(), elements };
    let (_, mut q) = quotient_by_group_action(&action)?;
    q.source = y;
    let h_map = factor_through_quotient(&q, c.map())?;
    let base = c.vertex_fiber(g.base())[0];
    Ok(IntermediateCover { upper: check_covering(&q)?, lower: check_covering(&h_map)?, base })
}

/// The deck transformations of `Y -> X` that are also deck transformations
/// of `Y -> Z`.
pub fn deck_group_of_intermediate(g: &GaloisGroup, ic: &IntermediateCover) -> Result<PermGroup, GaloisError> {
    let up = ic.upper.map();
    let mut perms = Vec::new();
    for (a, p) in g.elements().iter().zip(g.perm_rep().elements()) {
        if maps_agree(&compose_maps(up, &a.map)?, up) {
            perms.push(p.clone());
        }
    }
    Ok(PermGroup::from_elements(g.perm_rep().degree(), perms)?)
}

/// Pointed equivalence: the isomorphism `ψ: Z1 -> Z2` with `ψ ∘ g1 = g2`
/// and `h2 ∘ ψ = h1`, if there is one.
pub fn are_equivalent(a: &IntermediateCover, b: &IntermediateCover) -> Option<ComplexMap> {
    if !same_complex(a.upper.source(), b.upper.source()) || !same_complex(a.lower.target(), b.lower.target()) {
        return None;
    }
    let psi = factor_through_quotient(a.upper.map(), b.upper.map()).ok()?;
    if !is_isomorphism(&psi) {
        return None;
    }
    let down = compose_maps(b.lower.map(), &psi).ok()?;
    maps_agree(&down, a.lower.map()).then_some(psi)
}

/// Unpointed equivalence of two covers of the same base: an isomorphism
/// `ψ` with `h2 ∘ ψ = h1`, found by lifting `h1` to every candidate point.
pub fn covers_equivalent(h1: &CoveringCert, h2: &CoveringCert) -> Option<ComplexMap> {
    if !same_complex(h1.target(), h2.target()) || h1.degree() != h2.degree() {
        return None;
    }
    if h1.source().counts() != h2.source().counts() {
        return None;
    }
    let z0 = h1.source().graph().vertices().next()?;
    let x = h1.map().vertex(z0);
    h2.vertex_fiber(x).iter().filter_map(|&z| h2.lift_map(h1.map(), z0, z).ok()).find(is_isomorphism)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::galois::galois_group;
    use crate::permgroup::Permutation;

    #[test]
    fn cyclic_subcover() {
        let c = check_covering(&corpus::cyc_cover(4)).unwrap();
        let g = galois_group(&c, VertexId(0)).unwrap();
        let r2 = g.perm_rep().elements().iter().find(|p| p.order() == 2).unwrap().clone();
        let h = PermGroup::closure(4, &[r2]).unwrap();
        let ic = quotient_by_deck_subgroup(&g, &h).unwrap();
        assert_eq!(ic.degree(), 2);
        assert_eq!(ic.upper.degree(), 2);
        assert!(crate::map::are_isomorphic(ic.complex(), &std::sync::Arc::new(corpus::cyc(2))));
        let back = deck_group_of_intermediate(&g, &ic).unwrap();
        assert_eq!(back.elements(), h.elements());
        assert!(are_equivalent(&ic, &ic).is_some());
    }

    #[test]
    fn non_subgroups_are_rejected() {
        let c = check_covering(&corpus::cyc_cover(3)).unwrap();
        let g = galois_group(&c, VertexId(0)).unwrap();
        let swap = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let h = PermGroup::closure(3, &[swap]).unwrap();
        assert!(matches!(quotient_by_deck_subgroup(&g, &h), Err(GaloisError::NotSubgroup)));
    }

    #[test]
    fn unpointed_equivalence_of_cycles() {
        let a = check_covering(&corpus::cyc_cover(3)).unwrap();
        let b = check_covering(&corpus::cyc_cover(3)).unwrap();
        assert!(covers_equivalent(&a, &b).is_some());
        let c = check_covering(&corpus::cyc_cover(2)).unwrap();
        assert!(covers_equivalent(&a, &c).is_none());
    }
}
