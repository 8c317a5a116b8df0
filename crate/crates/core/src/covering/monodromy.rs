//! The monodromy action of based loops on a fibre.

use std::sync::Arc;

use super::presentation::{ComplexPresentation, Letter};
use super::CoveringCert;
use crate::error::{CoveringError, PermError};
use crate::graph::VertexId;
use crate::permgroup::{PermGroup, Permutation};

/// Monodromy of a covering at a base vertex. Fibre points are numbered in
/// the order of `fiber`; `perms[g]` is the inverse of the endpoint map of
/// generator `g`, so that words multiply left to right.
#[derive(Clone, Debug)]
pub struct Monodromy {
    pub presentation: ComplexPresentation,
    pub fiber: Vec<VertexId>,
    pub perms: Vec<Permutation>,
}

pub fn monodromy(c: &CoveringCert, base: VertexId) -> Result<Monodromy, CoveringError> {
    let x = c.target().clone();
    if !x.graph().has_vertex(base) {
        return Err(crate::error::ComplexError::UnknownVertex(base).into());
    }
    let cp = ComplexPresentation::new(Arc::clone(&x), base)?;
    let fiber = c.vertex_fiber(base).to_vec();
    let yg = c.source().graph();
    let mut perms = Vec::with_capacity(cp.generators.len());
    for &a in &cp.generators {
        let gamma = cp.tree.generator_loop(x.graph(), a);
        let images = fiber
            .iter()
            .map(|&u| {
                let end = c.lift_path(&gamma, u)?.end(yg);
                Ok(fiber.iter().position(|&w| w == end).expect("lift ends in the fibre"))
            })
            .collect::<Result<Vec<_>, CoveringError>>()?;
        let rho = Permutation::from_images(images).expect("lifting permutes the fibre");
        perms.push(rho.inverse());
    }
    Ok(Monodromy { presentation: cp, fiber, perms })
}

impl Monodromy {
    pub fn degree(&self) -> usize {
        self.fiber.len()
    }

    pub fn letter(&self, l: Letter) -> Permutation {
        let p = &self.perms[l.generator];
        if l.inverse {
            p.inverse()
        } else {
            p.clone()
        }
    }

    /// The permutation of a word: the product of its letters in order.
    pub fn of_word(&self, w: &[Letter]) -> Permutation {
        w.iter().fold(Permutation::identity(self.degree()), |acc, l| acc.compose(&self.letter(*l)))
    }

    /// The fibre index where the lift of `w` from fibre point `i` ends.
    pub fn endpoint(&self, i: usize, w: &[Letter]) -> usize {
        self.of_word(w).inverse().apply(i)
    }

    pub fn group(&self) -> Result<PermGroup, PermError> {
        PermGroup::closure(self.degree(), &self.perms)
    }

    /// Relators act trivially.
    pub fn respects_relators(&self) -> bool {
        self.presentation.presentation.relators.iter().all(|r| self.of_word(r).is_identity())
    }

    /// The monodromy group acts transitively, i.e. the cover is connected.
    pub fn is_transitive(&self) -> Result<bool, PermError> {
        let g = self.group()?;
        let mut seen = vec![false; self.degree()];
        for p in g.elements() {
            seen[p.apply(0)] = true;
        }
        Ok(seen.into_iter().all(|s| s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::covering::check_covering;

    #[test]
    fn cyclic_monodromy() {
        let c = check_covering(&corpus::cyc_cover(5)).unwrap();
        let m = monodromy(&c, VertexId(0)).unwrap();
        assert_eq!(m.perms.len(), 1);
        assert_eq!(m.perms[0].order(), 5);
        assert_eq!(m.group().unwrap().order(), 5);
        assert!(m.is_transitive().unwrap());
    }

    #[test]
    fn words_follow_lifts() {
        let s3 =
            [Permutation::from_cycles(3, &[&[0, 1]]).unwrap(), Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()];
        let c = check_covering(&corpus::permutation_cover(&s3)).unwrap();
        let m = monodromy(&c, VertexId(0)).unwrap();
        let w = m.presentation.presentation.parse_word("a b b^ a b").unwrap();
        let gamma = m.presentation.loop_of(&w);
        for i in 0..3 {
            let end = c.lift_path(&gamma, m.fiber[i]).unwrap().end(c.source().graph());
            assert_eq!(m.fiber[m.endpoint(i, &w)], end);
        }
        assert_eq!(m.group().unwrap().order(), 6);
    }

    #[test]
    fn sphere_monodromy_respects_relator() {
        let c = check_covering(&corpus::sph2_rp2()).unwrap();
        let m = monodromy(&c, VertexId(0)).unwrap();
        assert!(m.respects_relators());
        assert_eq!(m.group().unwrap().order(), 2);
    }
}
