//! Presentations read off a complex and Todd-Coxeter coset enumeration.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::complex::TwoComplex;
use crate::error::CoveringError;
use crate::graph::{spanning_tree, DartId, Path, SpanningTree, VertexId};
use crate::permgroup::Permutation;

pub const DEFAULT_MAX_COSETS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// Column of the coset table.
    pub fn column(self) -> usize {
        2 * self.generator + usize::from(self.inverse)
    }
}

/// A finite group presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<Letter>>,
}

fn reduce(word: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in word {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Vec<Letter>>) -> Self {
        Presentation { generators, relators }
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Parses a space separated word such as `a b^ a`.
    pub fn parse_word(&self, word: &str) -> Result<Vec<Letter>, CoveringError> {
        word.split_whitespace()
            .map(|tok| {
                let (name, inverse) = match tok.strip_suffix('^') {
                    Some(n) => (n, true),
                    None => (tok, false),
                };
                self.generator(name)
                    .map(|g| Letter::new(g, inverse))
                    .ok_or_else(|| CoveringError::UnknownGenerator(tok.to_string()))
            })
            .collect()
    }

    pub fn word_name(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter()
            .map(|l| format!("{}{}", self.generators[l.generator], if l.inverse { "^" } else { "" }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.word_name(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// The presentation of the fundamental group of a connected complex at a
/// base vertex: generators are the arcs off a spanning tree, relators are
/// the face boundaries with tree darts erased.
#[derive(Clone, Debug)]
pub struct ComplexPresentation {
    pub complex: Arc<TwoComplex>,
    pub base: VertexId,
    pub tree: SpanningTree,
    /// Forward arcs not in the tree, one per generator.
    pub generators: Vec<DartId>,
    pub presentation: Presentation,
}

impl ComplexPresentation {
    pub fn new(x: Arc<TwoComplex>, base: VertexId) -> Result<Self, CoveringError> {
        let g = x.graph();
        let tree = spanning_tree(g, base).map_err(|_| CoveringError::NotConnected)?;
        if tree.depth.contains(&usize::MAX) {
            return Err(CoveringError::NotConnected);
        }
        let generators: Vec<DartId> = g.arcs().filter(|d| !tree.contains(*d)).collect();
        let names = generators.iter().map(|d| g.dart_name(*d).to_string()).collect();
        let mut cp = ComplexPresentation {
            complex: x.clone(),
            base,
            tree,
            generators,
            presentation: Presentation::new(names, Vec::new()),
        };
        let relators = x
            .canonical_faces()
            .map(|f| reduce(x.boundary(f).iter().filter_map(|d| cp.letter(*d))))
            .filter(|r| !r.is_empty())
            .collect();
        cp.presentation.relators = relators;
        Ok(cp)
    }

    /// The letter read along a dart; tree darts read nothing.
    pub fn letter(&self, d: DartId) -> Option<Letter> {
        let g = self.complex.graph();
        let arc = if g.is_forward(d) { d } else { g.inv(d) };
        let i = self.generators.iter().position(|&a| a == arc)?;
        Some(Letter::new(i, arc != d))
    }

    pub fn word_of_path(&self, p: &Path) -> Vec<Letter> {
        reduce(p.darts.iter().filter_map(|d| self.letter(*d)))
    }

    /// The based loop reading `word`.
    pub fn loop_of(&self, word: &[Letter]) -> Path {
        let g = self.complex.graph();
        let mut p = Path::empty(self.base);
        for l in word {
            let a = self.generators[l.generator];
            let d = if l.inverse { g.inv(a) } else { a };
            p = p.concat(&self.tree.generator_loop(g, d));
        }
        p
    }

    /// Parses a subgroup generator given either as generator letters or as a
    /// based closed path of dart names.
    pub fn parse_subgroup_word(&self, word: &str) -> Result<Vec<Letter>, CoveringError> {
        if let Ok(w) = self.presentation.parse_word(word) {
            return Ok(w);
        }
        let g = self.complex.graph();
        let toks: Vec<&str> = word.split_whitespace().collect();
        match g.parse_path(self.base, &toks) {
            Some(p) if p.is_closed(g) => Ok(self.word_of_path(&p)),
            _ => Err(CoveringError::UnknownGenerator(word.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableStatus {
    Closed,
    /// The enumeration hit the coset bound.
    Exhausted {
        bound: usize,
    },
}

/// A standardized coset table. Columns are `2g` for generator `g` and
/// `2g + 1` for its inverse; coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub num_generators: usize,
    pub rows: Vec<Vec<Option<usize>>>,
    pub status: TableStatus,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.status == TableStatus::Closed
    }

    /// The index of the subgroup, when the table is closed.
    pub fn index(&self) -> Option<usize> {
        self.is_closed().then_some(self.len())
    }

    pub fn act(&self, coset: usize, l: Letter) -> Option<usize> {
        self.rows.get(coset)?.get(l.column()).copied().flatten()
    }

    pub fn act_word(&self, coset: usize, word: &[Letter]) -> Option<usize> {
        word.iter().try_fold(coset, |c, l| self.act(c, *l))
    }

    /// Right action of a generator on cosets.
    pub fn permutation(&self, generator: usize) -> Option<Permutation> {
        let images: Option<Vec<usize>> = (0..self.len()).map(|c| self.act(c, Letter::new(generator, false))).collect();
        Permutation::from_images(images?).ok()
    }
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    live: usize,
    bound: usize,
    overflow: bool,
}

impl Enumerator {
    fn new(cols: usize, bound: usize) -> Self {
        Enumerator { cols, table: vec![vec![None; cols]], parent: vec![0], live: 1, bound, overflow: false }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        if self.live >= self.bound {
            self.overflow = true;
            return false;
        }
        let m = self.table.len();
        self.table.push(vec![None; self.cols]);
        self.parent.push(m);
        self.live += 1;
        self.table[c][x] = Some(m);
        self.table[m][x ^ 1] = Some(c);
        true
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut k = c;
        while self.parent[k] != r {
            let next = self.parent[k];
            self.parent[k] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        self.live -= 1;
        queue.push(hi);
    }

    fn coincidence(&mut self, k: usize, l: usize) {
        let mut queue = Vec::new();
        self.merge(k, l, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let Some(f) = self.table[e][x] else { continue };
                self.table[f][x ^ 1] = None;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if let Some(t) = self.table[e1][x] {
                    self.merge(f1, t, &mut queue);
                } else if let Some(t) = self.table[f1][x ^ 1] {
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = Some(f1);
                    self.table[f1][x ^ 1] = Some(e1);
                }
            }
        }
    }

    /// Traces `w` from both ends of `c`, defining cosets as needed, and
    /// records the deduction or coincidence it forces.
    fn scan_and_fill(&mut self, c: usize, w: &[usize]) {
        if w.is_empty() {
            return;
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j {
                match self.table[f][w[i]] {
                    Some(n) => {
                        f = n;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i as isize {
                match self.table[b][w[j as usize] ^ 1] {
                    Some(n) => {
                        b = n;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            }
            if j == i as isize {
                self.table[f][w[i]] = Some(b);
                self.table[b][w[i] ^ 1] = Some(f);
                return;
            }
            if !self.define(f, w[i]) {
                return;
            }
        }
    }
}

fn columns(w: &[Letter]) -> Vec<usize> {
    w.iter().map(|l| l.column()).collect()
}

/// Enumerates the cosets of the subgroup generated by `subgroup` using the
/// relator-based (HLT) strategy. The result is standardized so that cosets
/// appear in the order a breadth-first walk from coset 0 first reaches them.
/// If more than `max_cosets` cosets would be live at once the partial table
/// is returned with status `Exhausted`.
pub fn coset_enumerate(
    p: &Presentation,
    subgroup: &[Vec<Letter>],
    max_cosets: usize,
) -> Result<CosetTable, CoveringError> {
    let ngens = p.generators.len();
    for l in p.relators.iter().chain(subgroup).flatten() {
        if l.generator >= ngens {
            return Err(CoveringError::UnknownGenerator(format!("#{}", l.generator)));
        }
    }
    let cols = 2 * ngens;
    let rels: Vec<Vec<usize>> = p.relators.iter().map(|r| columns(r)).collect();
    let mut en = Enumerator::new(cols, max_cosets.max(1));
    for h in subgroup {
        en.scan_and_fill(0, &columns(h));
    }
    let mut c = 0;
    while c < en.table.len() && !en.overflow {
        for r in &rels {
            if !en.is_live(c) || en.overflow {
                break;
            }
            en.scan_and_fill(c, r);
        }
        for x in 0..cols {
            if !en.is_live(c) || en.overflow {
                break;
            }
            if en.table[c][x].is_none() {
                en.define(c, x);
            }
        }
        c += 1;
    }
    let status = if en.overflow { TableStatus::Exhausted { bound: max_cosets } } else { TableStatus::Closed };
    let table = standardize(&mut en, ngens, status);
    if table.is_closed() {
        for i in 0..table.len() {
            for r in &p.relators {
                if table.act_word(i, r) != Some(i) {
                    return Err(CoveringError::RelatorViolation(p.word_name(r)));
                }
            }
        }
        for h in subgroup {
            if table.act_word(0, h) != Some(0) {
                return Err(CoveringError::RelatorViolation(p.word_name(h)));
            }
        }
    }
    Ok(table)
}

fn standardize(en: &mut Enumerator, ngens: usize, status: TableStatus) -> CosetTable {
    let mut number = vec![usize::MAX; en.table.len()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    number[0] = 0;
    order.push(0);
    while let Some(c) = queue.pop_front() {
        for x in 0..en.cols {
            if let Some(t) = en.table[c][x] {
                let t = en.rep(t);
                if number[t] == usize::MAX {
                    number[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(order.len());
    for &c in &order {
        let row = (0..en.cols)
            .map(|x| {
                let t = en.table[c][x]?;
                let t = en.rep(t);
                Some(number[t])
            })
            .collect();
        rows.push(row);
    }
    CosetTable { num_generators: ngens, rows, status }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn pres(gens: &[&str], rels: &[&str]) -> Presentation {
        let mut p = Presentation::new(gens.iter().map(|s| s.to_string()).collect(), vec![]);
        p.relators = rels.iter().map(|r| p.parse_word(r).unwrap()).collect();
        p
    }

    #[test]
    fn trivial_group() {
        let p = pres(&["a"], &["a"]);
        let t = coset_enumerate(&p, &[], 100).unwrap();
        assert_eq!(t.index(), Some(1));
    }

    #[test]
    fn free_group_with_power_subgroup() {
        let p = pres(&["a"], &[]);
        let h = p.parse_word("a a a a").unwrap();
        let t = coset_enumerate(&p, &[h], 100).unwrap();
        assert_eq!(t.index(), Some(4));
        assert_eq!(t.permutation(0).unwrap().order(), 4);
        let free = coset_enumerate(&p, &[], 50).unwrap();
        assert_eq!(free.status, TableStatus::Exhausted { bound: 50 });
    }

    #[test]
    fn finite_groups() {
        let s3 = pres(&["a", "b"], &["a a", "b b b", "a b a b"]);
        assert_eq!(coset_enumerate(&s3, &[], 100).unwrap().index(), Some(6));
        let a = s3.parse_word("a").unwrap();
        assert_eq!(coset_enumerate(&s3, &[a], 100).unwrap().index(), Some(3));
        let q8 = pres(&["i", "j"], &["i i i i", "i i j^ j^", "i j i j^"]);
        assert_eq!(coset_enumerate(&q8, &[], 1000).unwrap().index(), Some(8));
    }

    #[test]
    fn torus_subgroup() {
        let x = Arc::new(corpus::torus());
        let cp = ComplexPresentation::new(x, VertexId(0)).unwrap();
        assert_eq!(cp.presentation.relators.len(), 1);
        let p = &cp.presentation;
        let h = vec![p.parse_word("a a").unwrap(), p.parse_word("b").unwrap()];
        let t = coset_enumerate(p, &h, 1000).unwrap();
        assert_eq!(t.index(), Some(2));
    }

    #[test]
    fn sphere_presentation_is_trivial() {
        let x = Arc::new(corpus::sph2());
        let cp = ComplexPresentation::new(x, VertexId(0)).unwrap();
        assert_eq!(cp.presentation.generators.len(), 1);
        let t = coset_enumerate(&cp.presentation, &[], 100).unwrap();
        assert_eq!(t.index(), Some(1));
    }

    #[test]
    fn standard_numbering() {
        let p = pres(&["a"], &["a a a"]);
        let t = coset_enumerate(&p, &[], 10).unwrap();
        assert_eq!(t.rows[0][0], Some(1));
        assert_eq!(t.rows[1][0], Some(2));
    }
}
