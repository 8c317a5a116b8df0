//! Covering automorphisms, Galois groups and the correspondence between
//! intermediate covers and subgroups.

mod correspondence;
mod excision;
mod intermediate;
mod irregular;

use crate::corpus::permutation_cover;
use crate::covering::{check_covering, CoveringCert};
use crate::error::{CoveringError, GaloisError};
use crate::graph::VertexId;
use crate::map::{compose_maps, is_isomorphism, maps_agree, ComplexMap};
use crate::permgroup::{find_isomorphism, PermGroup, Permutation};

pub use correspondence::{galois_closure, intermediate_lattice, intermediate_poset, Correspondence, IntermediatePoset};
pub use excision::{lattice_excision, LatticeExcision};
pub use intermediate::{
    are_equivalent, covers_equivalent, deck_group_of_intermediate, quotient_by_deck_subgroup, IntermediateCover,
};
pub use irregular::{is_completely_irregular, is_completely_irregular_map};

/// An automorphism `a` of the total complex with `f ∘ a = f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeckTransform {
    pub map: ComplexMap,
}

impl DeckTransform {
    /// The permutation of the vertices of the total complex.
    pub fn vertex_permutation(&self) -> Permutation {
        Permutation::from_images(self.map.vmap.iter().map(|v| v.0).collect()).expect("automorphisms are bijective")
    }

    pub fn is_identity(&self) -> bool {
        self.map.vmap.iter().enumerate().all(|(i, v)| v.0 == i)
    }
}

/// Builds the covering automorphism sending `u` to `u2` by lifting the
/// covering map through itself. Fails with the first generator loop at `u`
/// whose lifts from `u` and from `u2` differ in closedness.
pub fn automorphism_from_vertices(c: &CoveringCert, u: VertexId, u2: VertexId) -> Result<DeckTransform, GaloisError> {
    let f = c.map();
    let yg = c.source().graph();
    if !yg.has_vertex(u) || !yg.has_vertex(u2) {
        return Err(CoveringError::BasepointNotInFiber(format!("{}", u.max(u2))).into());
    }
    if f.vertex(u) != f.vertex(u2) {
        return Err(CoveringError::BasepointNotInFiber(yg.vertex_name(u2).to_string()).into());
    }
    let a = match c.lift_map(f, u, u2) {
        Ok(a) => a,
        Err(CoveringError::SubgroupConditionFails(w)) => return Err(GaloisError::DaggerFails(w)),
        Err(e) => return Err(e.into()),
    };
    if !is_isomorphism(&a) || !maps_agree(&compose_maps(f, &a)?, f) {
        return Err(GaloisError::DaggerFails(format!("lift at `{}` is not bijective", yg.vertex_name(u2))));
    }
    Ok(DeckTransform { map: a })
}

/// The group of covering automorphisms, stored with its faithful action on
/// the vertices of the total complex.
#[derive(Clone, Debug)]
pub struct GaloisGroup {
    cert: CoveringCert,
    base: VertexId,
    elements: Vec<DeckTransform>,
    group: PermGroup,
    /// First failing generator loop, if the group is smaller than the fibre.
    witness: Option<String>,
}

/// Collects the automorphisms sending a fixed vertex over `v` to each vertex
/// of the fibre. `|Gal|` divides the degree, with equality exactly for
/// Galois covers.
pub fn galois_group(c: &CoveringCert, v: VertexId) -> Result<GaloisGroup, GaloisError> {
    if !c.target().graph().has_vertex(v) {
        return Err(crate::error::ComplexError::UnknownVertex(v).into());
    }
    let fiber = c.vertex_fiber(v);
    let u = fiber[0];
    let mut found = Vec::new();
    let mut witness = None;
    for &u2 in fiber {
        match automorphism_from_vertices(c, u, u2) {
            Ok(a) => found.push(a),
            Err(GaloisError::DaggerFails(w)) => {
                witness.get_or_insert(w);
            }
            Err(e) => return Err(e),
        }
    }
    let n = c.source().num_vertices();
    let mut pairs: Vec<(Permutation, DeckTransform)> = found.into_iter().map(|a| (a.vertex_permutation(), a)).collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let group = PermGroup::from_elements(n, pairs.iter().map(|p| p.0.clone()).collect())?;
    let elements = pairs.into_iter().map(|p| p.1).collect();
    Ok(GaloisGroup { cert: c.clone(), base: v, elements, group, witness })
}

impl GaloisGroup {
    pub fn cert(&self) -> &CoveringCert {
        &self.cert
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in the order of their vertex permutations.
    pub fn elements(&self) -> &[DeckTransform] {
        &self.elements
    }

    /// The action on the vertices of the total complex.
    pub fn perm_rep(&self) -> &PermGroup {
        &self.group
    }

    pub fn element(&self, p: &Permutation) -> Option<&DeckTransform> {
        let i = self.group.elements().binary_search(p).ok()?;
        Some(&self.elements[i])
    }

    pub fn is_galois(&self) -> bool {
        self.order() == self.cert.degree()
    }

    pub fn witness(&self) -> Option<&str> {
        self.witness.as_deref()
    }

    /// No element other than the identity fixes a vertex.
    pub fn acts_freely(&self) -> bool {
        self.group.acts_freely()
    }

    /// The action restricted to the fibre over the base vertex.
    pub fn fiber_rep(&self) -> PermGroup {
        let fiber = self.cert.vertex_fiber(self.base);
        let pos = |v: VertexId| fiber.iter().position(|&w| w == v).expect("fibres are preserved");
        let perms: Vec<Permutation> = self
            .elements
            .iter()
            .map(|a| {
                Permutation::from_images(fiber.iter().map(|&u| pos(a.map.vertex(u))).collect())
                    .expect("bijective on the fibre")
            })
            .collect();
        PermGroup::from_elements(fiber.len(), perms).expect("restriction of a group")
    }
}

/// Whether the covering is Galois, with a failing loop as witness otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisVerdict {
    pub galois: bool,
    pub order: usize,
    pub degree: usize,
    pub witness: Option<String>,
}

pub fn is_galois(c: &CoveringCert) -> Result<GaloisVerdict, GaloisError> {
    let v = c.target().graph().vertices().next().expect("covers have nonempty bases");
    let g = galois_group(c, v)?;
    Ok(GaloisVerdict { galois: g.is_galois(), order: g.order(), degree: c.degree(), witness: g.witness.clone() })
}

/// A Galois graph cover of the bouquet on `gens.len()` loops whose Galois
/// group is the group generated by `gens`: the Schreier diagram of its
/// regular action by right multiplication.
pub fn inverse_galois(gens: &[Permutation]) -> Result<(CoveringCert, GaloisGroup), GaloisError> {
    let degree = gens.first().map_or(1, Permutation::degree);
    let g = PermGroup::closure(degree, gens)?;
    let elems = g.elements();
    let index = |p: &Permutation| elems.binary_search(p).expect("closed group");
    let regular: Vec<Permutation> = gens
        .iter()
        .map(|s| {
            Permutation::from_images(elems.iter().map(|x| index(&x.compose(s))).collect())
                .expect("right multiplication is bijective")
        })
        .collect();
    let regular = if regular.is_empty() { vec![Permutation::identity(1)] } else { regular };
    let c = check_covering(&permutation_cover(&regular))?;
    let gal = galois_group(&c, VertexId(0))?;
    if !gal.is_galois() || find_isomorphism(&gal.fiber_rep(), &g).is_none() {
        return Err(GaloisError::CorrespondenceFails("regular cover has the wrong group".to_string()));
    }
    Ok((c, gal))
}
