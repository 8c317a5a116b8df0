//! Elementary homotopies of paths.
//!
//! Graph homotopy is decided exactly by free reduction. In a 2-complex the
//! search is bounded: it explores freely reduced words reachable by face
//! insertions (a deletion is an insertion of the inverse face followed by
//! free reduction) from both ends at once.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::complex::{FaceId, TwoComplex};
use crate::graph::{DartId, Graph, Path};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HomotopyMove {
    SpurInsert { pos: usize, dart: DartId },
    SpurDelete { pos: usize },
    FaceInsert { pos: usize, face: FaceId, start: usize },
    FaceDelete { pos: usize, face: FaceId, start: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomotopyVerdict {
    Proven(Vec<HomotopyMove>),
    Refuted(String),
    Inconclusive(String),
}

impl HomotopyVerdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, HomotopyVerdict::Proven(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomotopyBounds {
    /// Longest intermediate reduced word.
    pub max_len: usize,
    /// Number of face moves.
    pub max_moves: usize,
    /// Number of distinct reduced words visited.
    pub max_states: usize,
}

impl Default for HomotopyBounds {
    fn default() -> Self {
        HomotopyBounds { max_len: 64, max_moves: 16, max_states: 200_000 }
    }
}

impl HomotopyBounds {
    pub fn new(max_len: usize, max_moves: usize) -> Self {
        HomotopyBounds { max_len, max_moves, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HomotopyError {
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("paths do not share endpoints")]
    EndpointMismatch,
    #[error("invalid path")]
    InvalidPath,
}

/// Free reduction of a dart word.
pub fn free_reduce(g: &Graph, word: &[DartId]) -> Vec<DartId> {
    let mut stack: Vec<DartId> = Vec::with_capacity(word.len());
    for &d in word {
        if stack.last() == Some(&g.inv(d)) {
            stack.pop();
        } else {
            stack.push(d);
        }
    }
    stack
}

/// Removes every spur.
pub fn reduce_path(g: &Graph, p: &Path) -> Path {
    Path::new(p.start, free_reduce(g, &p.darts))
}

pub fn is_reduced(g: &Graph, p: &Path) -> bool {
    p.darts.windows(2).all(|w| w[1] != g.inv(w[0]))
}

/// Free reduction recording each spur deletion as `(position, dart)`.
fn reduce_with_moves(g: &Graph, word: &[DartId]) -> (Vec<DartId>, Vec<(usize, DartId)>) {
    let mut stack: Vec<DartId> = Vec::with_capacity(word.len());
    let mut moves = Vec::new();
    for &d in word {
        match stack.last() {
            Some(&top) if top == g.inv(d) => {
                moves.push((stack.len() - 1, top));
                stack.pop();
            }
            _ => stack.push(d),
        }
    }
    (stack, moves)
}

fn rotated(x: &TwoComplex, f: FaceId, start: usize) -> Vec<DartId> {
    let b = x.boundary(f);
    let n = b.len();
    (0..n).map(|i| b[(start + i) % n]).collect()
}

/// Applies one elementary move.
pub fn apply_move(x: &TwoComplex, p: &Path, m: &HomotopyMove) -> Result<Path, HomotopyError> {
    let g = x.graph();
    let len = p.len();
    let illegal = |s: &str| HomotopyError::IllegalMove(s.to_string());
    let mut darts = p.darts.clone();
    match *m {
        HomotopyMove::SpurInsert { pos, dart } => {
            if pos > len || !g.has_dart(dart) || p.vertex_at(g, pos) != g.src(dart) {
                return Err(illegal("spur does not start at the insertion vertex"));
            }
            darts.splice(pos..pos, [dart, g.inv(dart)]);
        }
        HomotopyMove::SpurDelete { pos } => {
            if pos + 1 >= len || darts[pos + 1] != g.inv(darts[pos]) {
                return Err(illegal("no spur at the given position"));
            }
            darts.drain(pos..pos + 2);
        }
        HomotopyMove::FaceInsert { pos, face, start } => {
            if pos > len || !x.has_face(face) || start >= x.face_len(face) {
                return Err(illegal("face insertion out of range"));
            }
            let w = rotated(x, face, start);
            if g.src(w[0]) != p.vertex_at(g, pos) {
                return Err(illegal("face boundary does not start at the insertion vertex"));
            }
            darts.splice(pos..pos, w);
        }
        HomotopyMove::FaceDelete { pos, face, start } => {
            if !x.has_face(face) || start >= x.face_len(face) {
                return Err(illegal("face deletion out of range"));
            }
            let w = rotated(x, face, start);
            if pos + w.len() > len || darts[pos..pos + w.len()] != w[..] {
                return Err(illegal("face boundary does not occur at the given position"));
            }
            darts.drain(pos..pos + w.len());
        }
    }
    Ok(Path::new(p.start, darts))
}

/// Applies a sequence of moves.
pub fn replay(x: &TwoComplex, p: &Path, moves: &[HomotopyMove]) -> Result<Path, HomotopyError> {
    moves.iter().try_fold(p.clone(), |acc, m| apply_move(x, &acc, m))
}

type Macro = (usize, FaceId, usize);

struct Side {
    seen: HashMap<Vec<DartId>, Option<(Vec<DartId>, Macro)>>,
    frontier: Vec<Vec<DartId>>,
    depth: usize,
}

impl Side {
    fn new(root: Vec<DartId>) -> Self {
        let mut seen = HashMap::new();
        seen.insert(root.clone(), None);
        Side { seen, frontier: vec![root], depth: 0 }
    }

    /// Macro steps from the root to `w`.
    fn trail(&self, w: &[DartId]) -> Vec<(Vec<DartId>, Macro)> {
        let mut out = Vec::new();
        let mut cur = w.to_vec();
        while let Some(Some((parent, mv))) = self.seen.get(&cur) {
            out.push((parent.clone(), *mv));
            cur = parent.clone();
        }
        out.reverse();
        out
    }
}

/// Expands a macro step from `w` into elementary moves.
fn macro_moves(x: &TwoComplex, w: &[DartId], (pos, face, start): Macro) -> Vec<HomotopyMove> {
    let mut u = w.to_vec();
    u.splice(pos..pos, rotated(x, face, start));
    let (_, spurs) = reduce_with_moves(x.graph(), &u);
    let mut out = vec![HomotopyMove::FaceInsert { pos, face, start }];
    out.extend(spurs.into_iter().map(|(pos, _)| HomotopyMove::SpurDelete { pos }));
    out
}

/// Inverse of a macro step from `w`: moves taking its result back to `w`.
fn macro_moves_inverse(x: &TwoComplex, w: &[DartId], (pos, face, start): Macro) -> Vec<HomotopyMove> {
    let mut u = w.to_vec();
    u.splice(pos..pos, rotated(x, face, start));
    let (_, spurs) = reduce_with_moves(x.graph(), &u);
    let mut out: Vec<HomotopyMove> =
        spurs.into_iter().rev().map(|(pos, dart)| HomotopyMove::SpurInsert { pos, dart }).collect();
    out.push(HomotopyMove::FaceDelete { pos, face, start });
    out
}

fn neighbours(
    x: &TwoComplex,
    start: crate::graph::VertexId,
    w: &[DartId],
    max_len: usize,
) -> Vec<(Vec<DartId>, Macro)> {
    let g = x.graph();
    let mut out = Vec::new();
    for pos in 0..=w.len() {
        let v = if pos == 0 { start } else { g.dst(w[pos - 1]) };
        for f in x.faces() {
            for s in x.appearances(f, v) {
                let mut u = w.to_vec();
                u.splice(pos..pos, rotated(x, f, s));
                let r = free_reduce(g, &u);
                if r.len() <= max_len {
                    out.push((r, (pos, f, s)));
                }
            }
        }
    }
    out
}

/// Decides based homotopy of `p` and `q` within the given bounds. Exact on
/// complexes without faces.
pub fn homotopic_bounded(
    x: &TwoComplex,
    p: &Path,
    q: &Path,
    bounds: HomotopyBounds,
) -> Result<HomotopyVerdict, HomotopyError> {
    let g = x.graph();
    if !p.is_valid(g) || !q.is_valid(g) {
        return Err(HomotopyError::InvalidPath);
    }
    if p.start != q.start || p.end(g) != q.end(g) {
        return Err(HomotopyError::EndpointMismatch);
    }
    let (rp, mp) = reduce_with_moves(g, &p.darts);
    let (rq, mq) = reduce_with_moves(g, &q.darts);
    let head: Vec<HomotopyMove> = mp.iter().map(|&(pos, _)| HomotopyMove::SpurDelete { pos }).collect();
    let tail: Vec<HomotopyMove> = mq.iter().rev().map(|&(pos, dart)| HomotopyMove::SpurInsert { pos, dart }).collect();
    if rp == rq {
        let mut moves = head;
        moves.extend(tail);
        return Ok(HomotopyVerdict::Proven(moves));
    }
    if x.num_faces() == 0 {
        return Ok(HomotopyVerdict::Refuted(format!(
            "reduced forms `{}` and `{}` differ",
            g.path_name(&Path::new(p.start, rp)),
            g.path_name(&Path::new(q.start, rq))
        )));
    }
    let start = p.start;
    let mut sides = [Side::new(rp.clone()), Side::new(rq.clone())];
    let mut states = 2;
    let meet = 'search: loop {
        if sides[0].depth + sides[1].depth >= bounds.max_moves {
            return Ok(HomotopyVerdict::Inconclusive(format!("no certificate within {} face moves", bounds.max_moves)));
        }
        let i = if sides[0].frontier.len() <= sides[1].frontier.len() { 0 } else { 1 };
        if sides[i].frontier.is_empty() {
            return Ok(HomotopyVerdict::Inconclusive(format!(
                "search space under length {} exhausted",
                bounds.max_len
            )));
        }
        let frontier = std::mem::take(&mut sides[i].frontier);
        let mut next = Vec::new();
        for w in frontier {
            for (u, mv) in neighbours(x, start, &w, bounds.max_len) {
                if sides[i].seen.contains_key(&u) {
                    continue;
                }
                sides[i].seen.insert(u.clone(), Some((w.clone(), mv)));
                if sides[1 - i].seen.contains_key(&u) {
                    break 'search u;
                }
                states += 1;
                if states > bounds.max_states {
                    return Ok(HomotopyVerdict::Inconclusive(format!("state cap {} reached", bounds.max_states)));
                }
                next.push(u);
            }
        }
        sides[i].frontier = next;
        sides[i].depth += 1;
    };
    let mut moves = head;
    for (w, mv) in sides[0].trail(&meet) {
        moves.extend(macro_moves(x, &w, mv));
    }
    for (w, mv) in sides[1].trail(&meet).into_iter().rev() {
        moves.extend(macro_moves_inverse(x, &w, mv));
    }
    moves.extend(tail);
    Ok(HomotopyVerdict::Proven(moves))
}

/// Bounded test that a closed path is null-homotopic.
pub fn null_homotopic(x: &TwoComplex, p: &Path, bounds: HomotopyBounds) -> Result<HomotopyVerdict, HomotopyError> {
    homotopic_bounded(x, p, &Path::empty(p.start), bounds)
}

/// Breadth-first enumeration helper used by tests: all reduced words of
/// length at most `n` starting at `start`.
pub fn reduced_words(g: &Graph, start: crate::graph::VertexId, n: usize) -> Vec<Path> {
    let mut out = vec![Path::empty(start)];
    let mut queue = VecDeque::from([Path::empty(start)]);
    while let Some(p) = queue.pop_front() {
        if p.len() == n {
            continue;
        }
        let end = p.end(g);
        for d in g.darts_from(end) {
            if p.darts.last() == Some(&g.inv(d)) {
                continue;
            }
            let mut q = p.clone();
            q.darts.push(d);
            out.push(q.clone());
            queue.push_back(q);
        }
    }
    out
}
