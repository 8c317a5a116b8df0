//! The lattice of intermediate covers and its anti-isomorphism with the
//! subgroup lattice of the Galois group.

use std::collections::HashMap;

use super::intermediate::{are_equivalent, deck_group_of_intermediate, quotient_by_deck_subgroup};
use super::{galois_group, GaloisGroup, IntermediateCover};
use crate::constructions::{component_of, pullback, pullback_factorize, pushout, pushout_factorize, PushoutMode};
use crate::covering::{bottom_up_cover, check_covering, monodromy, CosetTable, CoveringCert, Letter, TableStatus};
use crate::error::GaloisError;
use crate::graph::DartImage;
use crate::map::{compose_maps, factor_through_quotient, is_isomorphism, ComplexMap, FaceImage};
use crate::permgroup::{is_normal, subgroup_lattice, PermGroup, Permutation, SubgroupLattice};

/// The intermediate covers of a Galois covering, one per subgroup.
/// `covers[i]` is `Y -> Y/H_i -> X` for `H_i = subgroups.subgroups[i]`.
/// Covers are ordered by factorization: `i ≤ j` when `Y/H_j` covers `Y/H_i`
/// compatibly, so `X` is the bottom and `Y` the top.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub group: GaloisGroup,
    pub subgroups: SubgroupLattice,
    pub covers: Vec<IntermediateCover>,
    /// `phi[i]` is the subgroup index of the deck group of `covers[i]`.
    pub phi: Vec<usize>,
    pub cover_leq: Vec<Vec<bool>>,
    /// Pullback classes.
    pub cover_join: Vec<Vec<usize>>,
    /// Pushout classes.
    pub cover_meet: Vec<Vec<usize>>,
}

fn fails(what: impl Into<String>) -> GaloisError {
    GaloisError::CorrespondenceFails(what.into())
}

/// Restricts the codomain of `k` to the image of the injective `incl`.
fn corestrict(k: &ComplexMap, incl: &ComplexMap) -> Option<ComplexMap> {
    let vinv: HashMap<_, _> = incl.vmap.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let dinv: HashMap<_, _> =
        incl.source.graph().darts().map(|d| (incl.dart_image(d).expect("inclusion"), d)).collect();
    let finv: HashMap<_, _> = incl.source.faces().map(|f| (incl.face_target(f).expect("inclusion").0, f)).collect();
    let vmap = k.vmap.iter().map(|v| vinv.get(v).map(|&i| crate::graph::VertexId(i))).collect::<Option<_>>()?;
    let dmap = k
        .dmap
        .iter()
        .map(|d| match d {
            DartImage::Dart(e) => dinv.get(e).map(|&x| DartImage::Dart(x)),
            DartImage::Vertex(v) => vinv.get(v).map(|&i| DartImage::Vertex(crate::graph::VertexId(i))),
        })
        .collect::<Option<_>>()?;
    let fmap = k
        .fmap
        .iter()
        .map(|f| match f {
            FaceImage::Face { face, offset } => finv.get(face).map(|&g| FaceImage::Face { face: g, offset: *offset }),
            FaceImage::Path(_) => None,
        })
        .collect::<Option<_>>()?;
    Some(ComplexMap { source: k.source.clone(), target: incl.source.clone(), vmap, dmap, fmap })
}

fn class_of(covers: &[IntermediateCover], ic: &IntermediateCover) -> Option<usize> {
    covers.iter().position(|c| c.degree() == ic.degree() && are_equivalent(c, ic).is_some())
}

/// The join of two intermediate covers: the component of the pullback
/// through which `Y` factors.
fn join_cover(a: &IntermediateCover, b: &IntermediateCover) -> Result<IntermediateCover, GaloisError> {
    let pb = pullback(a.lower.map(), b.lower.map())?;
    let k = pullback_factorize(&pb, a.upper.map(), b.upper.map())?;
    let (_, incl) = component_of(&pb.complex, k.vertex(a.base))?;
    let upper = corestrict(&k, &incl).ok_or_else(|| fails("pullback component"))?;
    let lower = compose_maps(a.lower.map(), &compose_maps(&pb.t1, &incl)?)?;
    Ok(IntermediateCover { upper: check_covering(&upper)?, lower: check_covering(&lower)?, base: a.base })
}

/// The meet of two intermediate covers: their pushout under `Y`.
fn meet_cover(a: &IntermediateCover, b: &IntermediateCover) -> Result<IntermediateCover, GaloisError> {
    let po = pushout(a.upper.map(), b.upper.map(), PushoutMode::Disjoint)?;
    let lower = pushout_factorize(&po, a.lower.map(), b.lower.map())?;
    let upper = compose_maps(&po.t1, a.upper.map())?;
    Ok(IntermediateCover { upper: check_covering(&upper)?, lower: check_covering(&lower)?, base: a.base })
}

/// Builds every intermediate cover of a Galois covering as a quotient by a
/// subgroup, and checks the correspondence: `Φ ∘ Ψ` and `Ψ ∘ Φ` are the
/// identity, the order is reversed, pullbacks go to intersections and
/// pushouts to generated subgroups, degrees are indices, and normal
/// subgroups give Galois lower legs with the expected quotient group.
pub fn intermediate_lattice(c: &CoveringCert) -> Result<Correspondence, GaloisError> {
    let v = c.target().graph().vertices().next().expect("covers have nonempty bases");
    let group = galois_group(c, v)?;
    if !group.is_galois() {
        return Err(GaloisError::NotGalois);
    }
    let subgroups = subgroup_lattice(group.perm_rep())?;
    let n = subgroups.len();
    let covers: Vec<IntermediateCover> =
        subgroups.subgroups.iter().map(|h| quotient_by_deck_subgroup(&group, h)).collect::<Result<_, _>>()?;

    let mut phi = Vec::with_capacity(n);
    for (i, ic) in covers.iter().enumerate() {
        let h = deck_group_of_intermediate(&group, ic)?;
        let j = subgroups.index_of(&h).ok_or_else(|| fails("deck group is not a subgroup"))?;
        if j != i {
            return Err(fails(format!("deck group of cover {i} is subgroup {j}")));
        }
        phi.push(j);
        let order = group.order();
        let hi = &subgroups.subgroups[i];
        if ic.degree() * hi.order() != order {
            return Err(fails(format!("cover {i} has degree {} but index {}", ic.degree(), order / hi.order())));
        }
        if !galois_group(&ic.upper, ic.upper.map().vertex(ic.base))?.is_galois() {
            return Err(fails(format!("upper leg of cover {i} is not Galois")));
        }
        let normal = is_normal(hi, group.perm_rep());
        let lower = galois_group(&ic.lower, v)?;
        if normal != lower.is_galois() {
            return Err(fails(format!("cover {i}: normality and Galois lower leg disagree")));
        }
        if normal {
            check_theta(&group, hi, ic, &lower)?;
        }
    }
    for i in 0..n {
        for j in 0..i {
            if are_equivalent(&covers[i], &covers[j]).is_some() {
                return Err(fails(format!("covers {i} and {j} are equivalent")));
            }
        }
    }

    let mut cover_leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            let factors = factor_through_quotient(covers[j].upper.map(), covers[i].upper.map())
                .ok()
                .is_some_and(|m| check_covering(&m).is_ok());
            cover_leq[i][j] = factors;
            if factors != subgroups.leq[j][i] {
                return Err(fails(format!("order between covers {i} and {j} is not reversed")));
            }
        }
    }

    let mut cover_join = vec![vec![0; n]; n];
    let mut cover_meet = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let join = join_cover(&covers[i], &covers[j])?;
            let k = class_of(&covers, &join).ok_or_else(|| fails("pullback is not a listed cover"))?;
            if k != subgroups.meet[i][j] {
                return Err(fails(format!("pullback of {i} and {j} is not the intersection")));
            }
            let meet = meet_cover(&covers[i], &covers[j])?;
            let m = class_of(&covers, &meet).ok_or_else(|| fails("pushout is not a listed cover"))?;
            if m != subgroups.join[i][j] {
                return Err(fails(format!("pushout of {i} and {j} is not the generated subgroup")));
            }
            cover_join[i][j] = k;
            cover_join[j][i] = k;
            cover_meet[i][j] = m;
            cover_meet[j][i] = m;
        }
    }
    Ok(Correspondence { group, subgroups, covers, phi, cover_leq, cover_join, cover_meet })
}

/// For normal `H`, each deck transformation of `Y` descends to `Y/H`; the
/// induced homomorphism onto the Galois group of `Y/H -> X` has kernel `H`.
fn check_theta(
    group: &GaloisGroup,
    h: &PermGroup,
    ic: &IntermediateCover,
    lower: &GaloisGroup,
) -> Result<(), GaloisError> {
    let up = ic.upper.map();
    let mut image = Vec::new();
    for (a, p) in group.elements().iter().zip(group.perm_rep().elements()) {
        let t = factor_through_quotient(up, &compose_maps(up, &a.map)?)?;
        if !is_isomorphism(&t) {
            return Err(fails("descended automorphism is not bijective"));
        }
        let q = Permutation::from_images(t.vmap.iter().map(|v| v.0).collect())?;
        if q.is_identity() != h.contains(p) {
            return Err(fails("kernel of the quotient map differs from the subgroup"));
        }
        image.push(q);
    }
    image.sort();
    image.dedup();
    if image.as_slice() != lower.perm_rep().elements() {
        return Err(fails("image of the quotient map is not the Galois group below"));
    }
    Ok(())
}

impl Correspondence {
    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    /// Indices of the covers other than `Y` and `X`.
    pub fn proper_nontrivial(&self) -> Vec<usize> {
        let top = self.group.order();
        (0..self.len()).filter(|&i| self.covers[i].degree() != 1 && self.covers[i].degree() != top).collect()
    }

    pub fn class_of(&self, ic: &IntermediateCover) -> Option<usize> {
        class_of(&self.covers, ic)
    }
}

/// The lattice of intermediate covers of an arbitrary finite connected
/// covering, as the interval above the deck group of `Y` inside the lattice
/// of its Galois closure.
#[derive(Clone, Debug)]
pub struct IntermediatePoset {
    pub closure: Correspondence,
    /// `Ŷ -> Y -> X`.
    pub cover: IntermediateCover,
    /// Subgroup indices `H ⊇ Gal(Ŷ, Y)`; these index the classes of
    /// intermediate covers of `Y -> X`.
    pub interval: Vec<usize>,
}

/// The Galois closure of a covering: the regular cover associated with the
/// monodromy group, together with its factorization through the covering.
pub fn galois_closure(c: &CoveringCert) -> Result<IntermediateCover, GaloisError> {
    let v = c.target().graph().vertices().next().expect("covers have nonempty bases");
    let m = monodromy(c, v)?;
    let g = m.group()?;
    let mut elems: Vec<Permutation> = g.elements().to_vec();
    let id = Permutation::identity(m.degree());
    elems.retain(|p| *p != id);
    elems.insert(0, id);
    let index: HashMap<Permutation, usize> = elems.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let ngen = m.perms.len();
    let rows = elems
        .iter()
        .map(|e| {
            (0..2 * ngen).map(|col| Some(index[&e.compose(&m.letter(Letter::new(col / 2, col % 2 == 1)))])).collect()
        })
        .collect();
    let table = CosetTable { num_generators: ngen, rows, status: TableStatus::Closed };
    let top = bottom_up_cover(&m.presentation, &table)?;
    let u_hat = top.vertex_fiber(v)[0];
    let upper = c
        .vertex_fiber(v)
        .iter()
        .find_map(|&u| c.lift_map(top.map(), u_hat, u).ok())
        .ok_or_else(|| fails("closure does not factor through the cover"))?;
    Ok(IntermediateCover { upper: check_covering(&upper)?, lower: c.clone(), base: u_hat })
}

/// Intermediate covers of any finite connected covering, via its Galois
/// closure. Galois coverings are their own closure.
pub fn intermediate_poset(c: &CoveringCert) -> Result<IntermediatePoset, GaloisError> {
    let cover = galois_closure(c)?;
    let top = compose_maps(cover.lower.map(), cover.upper.map())?;
    let closure = intermediate_lattice(&check_covering(&top)?)?;
    let ic = IntermediateCover { upper: cover.upper.clone(), lower: cover.lower.clone(), base: cover.base };
    let k = deck_group_of_intermediate(&closure.group, &ic)?;
    let interval = (0..closure.len()).filter(|&i| k.is_subgroup_of(&closure.subgroups.subgroups[i])).collect();
    Ok(IntermediatePoset { closure, cover, interval })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn cyclic_four_has_one_proper_class() {
        let c = check_covering(&corpus::cyc_cover(4)).unwrap();
        let l = intermediate_lattice(&c).unwrap();
        assert_eq!(l.len(), 3);
        let p = l.proper_nontrivial();
        assert_eq!(p.len(), 1);
        assert_eq!(l.covers[p[0]].degree(), 2);
    }

    #[test]
    fn sphere_lattice_has_two_elements() {
        let c = check_covering(&corpus::sph2_rp2()).unwrap();
        let l = intermediate_lattice(&c).unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.subgroups.check_axioms());
    }

    #[test]
    fn symmetric_group_lattice() {
        let s3 =
            [Permutation::from_cycles(3, &[&[0, 1]]).unwrap(), Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()];
        let (c, _) = crate::galois::inverse_galois(&s3).unwrap();
        let l = intermediate_lattice(&c).unwrap();
        assert_eq!(l.len(), 6);
        let mut degrees: Vec<usize> = l.covers.iter().map(IntermediateCover::degree).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 2, 3, 3, 3, 6]);
    }

    #[test]
    fn non_galois_covers_are_refused() {
        let c = check_covering(&corpus::irregular_cover()).unwrap();
        assert!(matches!(intermediate_lattice(&c), Err(GaloisError::NotGalois)));
        let p = intermediate_poset(&c).unwrap();
        assert_eq!(p.closure.group.order(), 6);
        // Y itself and X: the stabilizer of a point in S3 is maximal
        assert_eq!(p.interval.len(), 2);
    }
}
