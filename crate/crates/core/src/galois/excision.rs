//! Excision of a simply connected subcomplex leaves the lattice of
//! intermediate covers unchanged.

use super::correspondence::{intermediate_lattice, intermediate_poset, Correspondence};
use super::{galois_group, is_galois, IntermediateCover};
use crate::complex::Subcomplex;
use crate::covering::{check_covering, excise, CoveringCert, Excision};
use crate::error::GaloisError;
use crate::homotopy::HomotopyBounds;
use crate::map::{compose_maps, factor_through_quotient};
use crate::permgroup::hasse_edges;

#[derive(Clone, Debug)]
pub struct LatticeExcision {
    pub excision: Excision,
    /// Galois group orders before and after.
    pub group_orders: (usize, usize),
    /// Number of classes of intermediate covers before and after.
    pub sizes: (usize, usize),
    /// For Galois coverings, the class of each excised intermediate cover.
    pub map: Option<Vec<usize>>,
}

fn fails(what: impl Into<String>) -> GaloisError {
    GaloisError::CorrespondenceFails(what.into())
}

/// Excises `z` from the base and from every intermediate cover, and checks
/// that the result is an isomorphism of lattices preserving Galois lower
/// legs and Galois groups. For a non-Galois covering the intervals inside
/// the Galois closures are compared by size, degrees and order relations.
pub fn lattice_excision(
    c: &CoveringCert,
    z: &Subcomplex,
    bounds: HomotopyBounds,
) -> Result<LatticeExcision, GaloisError> {
    let excision = excise(c, z, bounds)?;
    let before = is_galois(c)?;
    let after = is_galois(&excision.cover)?;
    if before.galois != after.galois || before.order != after.order {
        return Err(fails("Galois group changed under excision"));
    }
    if !before.galois {
        let p = intermediate_poset(c)?;
        let q = intermediate_poset(&excision.cover)?;
        let shape = |l: &Correspondence, interval: &[usize]| {
            let mut degrees: Vec<usize> = interval.iter().map(|&i| l.subgroups.subgroups[i].order()).collect();
            degrees.sort();
            let leq: Vec<Vec<bool>> =
                interval.iter().map(|&i| interval.iter().map(|&j| l.subgroups.leq[i][j]).collect()).collect();
            (degrees, hasse_edges(&leq).len())
        };
        if shape(&p.closure, &p.interval) != shape(&q.closure, &q.interval) {
            return Err(fails("intervals differ after excision"));
        }
        return Ok(LatticeExcision {
            excision,
            group_orders: (before.order, after.order),
            sizes: (p.interval.len(), q.interval.len()),
            map: None,
        });
    }
    let l = intermediate_lattice(c)?;
    let m = intermediate_lattice(&excision.cover)?;
    let qy = &excision.cover_quotient;
    let mut map = Vec::with_capacity(l.len());
    for (i, ic) in l.covers.iter().enumerate() {
        let w = excise(&ic.lower, z, bounds)?;
        let down = compose_maps(&w.cover_quotient, ic.upper.map())?;
        let upper = check_covering(&factor_through_quotient(qy, &down)?)?;
        let image = IntermediateCover { upper, lower: w.cover.clone(), base: qy.vertex(ic.base) };
        let k = m.class_of(&image).ok_or_else(|| fails(format!("excised cover {i} is not a class")))?;
        if m.covers[k].degree() != ic.degree() {
            return Err(fails(format!("excised cover {i} changed degree")));
        }
        let v = c.target().graph().vertices().next().expect("nonempty base");
        let was = galois_group(&ic.lower, v)?.is_galois();
        if was != is_galois(&w.cover)?.galois {
            return Err(fails(format!("excised cover {i} changed Galois type")));
        }
        map.push(k);
    }
    let n = l.len();
    let mut seen = vec![false; m.len()];
    for &k in &map {
        if std::mem::replace(&mut seen[k], true) {
            return Err(fails("excision map is not injective"));
        }
    }
    if m.len() != n {
        return Err(fails("excision map is not surjective"));
    }
    for i in 0..n {
        for j in 0..n {
            if l.cover_leq[i][j] != m.cover_leq[map[i]][map[j]]
                || map[l.cover_join[i][j]] != m.cover_join[map[i]][map[j]]
                || map[l.cover_meet[i][j]] != m.cover_meet[map[i]][map[j]]
            {
                return Err(fails(format!("lattice operations differ on covers {i} and {j}")));
            }
        }
    }
    Ok(LatticeExcision { excision, group_orders: (before.order, after.order), sizes: (n, m.len()), map: Some(map) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn projective_plane_pair() {
        let c = check_covering(&corpus::sph2_subdivided_cover()).unwrap();
        let z = Subcomplex::from_names(c.target(), &["p"]).unwrap();
        let r = lattice_excision(&c, &z, HomotopyBounds::default()).unwrap();
        assert_eq!(r.group_orders, (2, 2));
        assert_eq!(r.sizes, (2, 2));
        assert_eq!(r.excision.base().counts(), (1, 1, 1));
    }

    #[test]
    fn cycle_with_trees_collapses_to_a_cycle() {
        let c = check_covering(&corpus::cyc4_with_trees_cover()).unwrap();
        let z = Subcomplex::from_names(c.target(), &["a0", "t"]).unwrap();
        let r = lattice_excision(&c, &z, HomotopyBounds::default()).unwrap();
        assert_eq!(r.group_orders, (2, 2));
        let y = r.excision.cover.source().clone();
        assert!(crate::map::are_isomorphic(&y, &std::sync::Arc::new(corpus::cyc(2))));
    }

    #[test]
    fn basepoint_excision_of_an_irregular_cover() {
        let c = check_covering(&corpus::irregular_cover()).unwrap();
        let z = Subcomplex::from_names(c.target(), &["v"]).unwrap();
        let r = lattice_excision(&c, &z, HomotopyBounds::default()).unwrap();
        assert_eq!(r.group_orders, (1, 1));
        assert!(r.map.is_none());
    }
}
