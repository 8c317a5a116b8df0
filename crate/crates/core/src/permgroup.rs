//! Finite permutation groups and their subgroup lattices.
//!
//! Composition reads right to left: `a.compose(&b)` is `i ↦ a(b(i))`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::PermError;

/// Default cap on the order of groups whose subgroups are enumerated.
pub const DEFAULT_SUBGROUP_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(PermError::NotPermutation(format!("{images:?}")));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                if a >= n {
                    return Err(PermError::NotPermutation(format!("point {a} outside 0..{n}")));
                }
                images[a] = c[(k + 1) % c.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.images[i] == i).collect()
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for i in 0..self.degree() {
            if seen[i] {
                continue;
            }
            let mut c = vec![i];
            seen[i] = true;
            let mut j = self.images[i];
            while j != i {
                seen[j] = true;
                c.push(j);
                j = self.images[j];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// A finite group of permutations of `0..degree`, elements kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), elements: vec![Permutation::identity(degree)] }
    }

    /// The smallest group containing `gens`.
    pub fn closure(degree: usize, gens: &[Permutation]) -> Result<Self, PermError> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DomainMismatch(degree, g.degree()));
        }
        let id = Permutation::identity(degree);
        let mut seen: BTreeSet<Permutation> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        Ok(PermGroup { degree, generators: gens.to_vec(), elements: seen.into_iter().collect() })
    }

    /// A group from an explicit element list, checked for closure.
    pub fn from_elements(degree: usize, elements: Vec<Permutation>) -> Result<Self, PermError> {
        let set: BTreeSet<Permutation> = elements.into_iter().collect();
        if !set.contains(&Permutation::identity(degree)) {
            return Err(PermError::NotSubgroup);
        }
        for a in &set {
            if a.degree() != degree {
                return Err(PermError::DomainMismatch(degree, a.degree()));
            }
            for b in &set {
                if !set.contains(&a.compose(b)) {
                    return Err(PermError::NotSubgroup);
                }
            }
        }
        let elements: Vec<Permutation> = set.into_iter().collect();
        Ok(PermGroup { degree, generators: elements.clone(), elements })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.elements.iter().all(|p| other.contains(p))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements.iter().all(|a| self.elements.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// Whether the group acts freely: no non-identity element fixes a point.
    pub fn acts_freely(&self) -> bool {
        self.elements.iter().all(|p| p.is_identity() || p.fixed_points().is_empty())
    }

    pub fn intersection(&self, other: &PermGroup) -> PermGroup {
        let elements: Vec<Permutation> = self.elements.iter().filter(|p| other.contains(p)).cloned().collect();
        PermGroup { degree: self.degree, generators: elements.clone(), elements }
    }

    pub fn join(&self, other: &PermGroup) -> PermGroup {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        PermGroup::closure(self.degree, &gens).expect("same degree")
    }

    pub fn stabilizer(&self, point: usize) -> PermGroup {
        let elements: Vec<Permutation> = self.elements.iter().filter(|p| p.apply(point) == point).cloned().collect();
        PermGroup { degree: self.degree, generators: elements.clone(), elements }
    }
}

/// Every subgroup of `g` exactly once, ordered by order then elements.
pub fn all_subgroups(g: &PermGroup) -> Result<Vec<PermGroup>, PermError> {
    all_subgroups_capped(g, DEFAULT_SUBGROUP_CAP)
}

pub fn all_subgroups_capped(g: &PermGroup, cap: usize) -> Result<Vec<PermGroup>, PermError> {
    let n = g.order();
    if n > cap {
        return Err(PermError::TooLarge(n, cap));
    }
    let els = g.elements();
    let index: HashMap<&Permutation, usize> = els.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let table: Vec<Vec<usize>> = els.iter().map(|a| els.iter().map(|b| index[&a.compose(b)]).collect()).collect();
    let close = |start: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut set = start.clone();
        let mut queue: VecDeque<usize> = set.iter().copied().collect();
        let gens: Vec<usize> = start.iter().copied().collect();
        while let Some(a) = queue.pop_front() {
            for &b in &gens {
                let c = table[a][b];
                if set.insert(c) {
                    queue.push_back(c);
                }
            }
        }
        set
    };
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for i in 0..n {
        found.insert(close(&BTreeSet::from([i])));
    }
    loop {
        let current: Vec<BTreeSet<usize>> = found.iter().cloned().collect();
        let mut grew = false;
        for a in &current {
            for b in &current {
                let u: BTreeSet<usize> = a.union(b).copied().collect();
                if found.insert(close(&u)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<PermGroup> = found
        .into_iter()
        .map(|s| {
            let elements: Vec<Permutation> = s.into_iter().map(|i| els[i].clone()).collect();
            PermGroup { degree: g.degree(), generators: elements.clone(), elements }
        })
        .collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    for h in &mut out {
        h.generators = minimal_generators(h);
    }
    Ok(out)
}

/// A small generating set, chosen greedily.
fn minimal_generators(h: &PermGroup) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span = PermGroup::trivial(h.degree());
    let mut by_order: Vec<&Permutation> = h.elements().iter().collect();
    by_order.sort_by_key(|p| std::cmp::Reverse(p.order()));
    for p in by_order {
        if span.order() == h.order() {
            break;
        }
        if !span.contains(p) {
            gens.push(p.clone());
            span = PermGroup::closure(h.degree(), &gens).expect("same degree");
        }
    }
    gens
}

pub fn is_normal(h: &PermGroup, g: &PermGroup) -> bool {
    h.is_subgroup_of(g)
        && g.elements().iter().all(|x| {
            let xi = x.inverse();
            h.elements().iter().all(|a| h.contains(&x.compose(a).compose(&xi)))
        })
}

pub fn normalizer(h: &PermGroup, g: &PermGroup) -> Result<PermGroup, PermError> {
    if !h.is_subgroup_of(g) {
        return Err(PermError::NotSubgroup);
    }
    let elements: Vec<Permutation> = g
        .elements()
        .iter()
        .filter(|x| {
            let xi = x.inverse();
            h.elements().iter().all(|a| h.contains(&x.compose(a).compose(&xi)))
        })
        .cloned()
        .collect();
    Ok(PermGroup { degree: g.degree(), generators: elements.clone(), elements })
}

/// Searches for a group isomorphism `a -> b`, returned as the images of the
/// elements of `a` (in element order).
pub fn find_isomorphism(a: &PermGroup, b: &PermGroup) -> Option<Vec<Permutation>> {
    if a.order() != b.order() {
        return None;
    }
    let gens = minimal_generators(a);
    let candidates: Vec<Vec<&Permutation>> =
        gens.iter().map(|g| b.elements().iter().filter(|p| p.order() == g.order()).collect()).collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if candidates.iter().any(|c| c.is_empty()) {
            return None;
        }
        let images: Vec<&Permutation> = choice.iter().enumerate().map(|(i, &c)| candidates[i][c]).collect();
        if let Some(hom) = extend_hom(a, &gens, &images) {
            return Some(hom);
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return None;
            }
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Extends generator images to a bijective homomorphism, if possible.
fn extend_hom(a: &PermGroup, gens: &[Permutation], images: &[&Permutation]) -> Option<Vec<Permutation>> {
    let mut map: HashMap<Permutation, Permutation> = HashMap::new();
    let id_a = Permutation::identity(a.degree());
    let id_b = Permutation::identity(images.first().map_or(0, |p| p.degree()));
    map.insert(id_a.clone(), id_b);
    let mut queue = VecDeque::from([id_a]);
    while let Some(x) = queue.pop_front() {
        let fx = map[&x].clone();
        for (g, &fg) in gens.iter().zip(images) {
            let y = g.compose(&x);
            let fy = fg.compose(&fx);
            match map.get(&y) {
                Some(prev) if *prev != fy => return None,
                Some(_) => {}
                None => {
                    map.insert(y.clone(), fy);
                    queue.push_back(y);
                }
            }
        }
    }
    let distinct: BTreeSet<&Permutation> = map.values().collect();
    if distinct.len() != a.order() {
        return None;
    }
    Some(a.elements().iter().map(|x| map[x].clone()).collect())
}

/// The lattice of subgroups ordered by inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupLattice {
    pub group: PermGroup,
    pub subgroups: Vec<PermGroup>,
    pub leq: Vec<Vec<bool>>,
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
    pub bottom: usize,
    pub top: usize,
}

pub fn subgroup_lattice(g: &PermGroup) -> Result<SubgroupLattice, PermError> {
    let subgroups = all_subgroups(g)?;
    Ok(SubgroupLattice::from_subgroups(g.clone(), subgroups))
}

impl SubgroupLattice {
    pub fn from_subgroups(group: PermGroup, subgroups: Vec<PermGroup>) -> Self {
        let n = subgroups.len();
        let find = |h: &PermGroup| -> usize {
            subgroups
                .iter()
                .position(|s| s.elements == h.elements)
                .expect("subgroup list is closed under joins and meets")
        };
        let leq = (0..n).map(|i| (0..n).map(|j| subgroups[i].is_subgroup_of(&subgroups[j])).collect()).collect();
        let join = (0..n).map(|i| (0..n).map(|j| find(&subgroups[i].join(&subgroups[j]))).collect()).collect();
        let meet = (0..n).map(|i| (0..n).map(|j| find(&subgroups[i].intersection(&subgroups[j]))).collect()).collect();
        let bottom = (0..n).min_by_key(|&i| subgroups[i].order()).unwrap_or(0);
        let top = (0..n).max_by_key(|&i| subgroups[i].order()).unwrap_or(0);
        SubgroupLattice { group, subgroups, leq, join, meet, bottom, top }
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn index_of(&self, h: &PermGroup) -> Option<usize> {
        self.subgroups.iter().position(|s| s.elements == h.elements)
    }

    /// Cover relations `(i, j)` with `i < j` and nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        hasse_edges(&self.leq)
    }

    /// Partial order, join, meet, bounds and absorption laws.
    pub fn check_axioms(&self) -> bool {
        check_lattice_axioms(&self.leq, &self.join, &self.meet, self.bottom, self.top)
    }
}

/// Cover relations of a partial order given by its matrix.
pub fn hasse_edges(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = leq.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !leq[i][j] {
                continue;
            }
            let between = (0..n).any(|k| k != i && k != j && leq[i][k] && leq[k][j]);
            if !between {
                out.push((i, j));
            }
        }
    }
    out
}

/// Checks that `leq` is a partial order with the given joins, meets and
/// bounds, and that absorption holds.
#[allow(clippy::needless_range_loop)]
pub fn check_lattice_axioms(
    leq: &[Vec<bool>],
    join: &[Vec<usize>],
    meet: &[Vec<usize>],
    bottom: usize,
    top: usize,
) -> bool {
    let n = leq.len();
    for i in 0..n {
        if !leq[i][i] || !leq[bottom][i] || !leq[i][top] {
            return false;
        }
        for j in 0..n {
            if i != j && leq[i][j] && leq[j][i] {
                return false;
            }
            for k in 0..n {
                if leq[i][j] && leq[j][k] && !leq[i][k] {
                    return false;
                }
            }
            let (u, m) = (join[i][j], meet[i][j]);
            if !leq[i][u] || !leq[j][u] || !leq[m][i] || !leq[m][j] {
                return false;
            }
            for k in 0..n {
                if leq[i][k] && leq[j][k] && !leq[u][k] {
                    return false;
                }
                if leq[k][i] && leq[k][j] && !leq[k][m] {
                    return false;
                }
            }
            if join[i][meet[i][j]] != i || meet[i][join[i][j]] != i {
                return false;
            }
        }
    }
    true
}
