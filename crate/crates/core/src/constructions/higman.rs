//! Higman composition: splicing several maps into one along a handle
//! configuration.
//!
//! Darts keep their ids and names in the composite; only the terminal
//! vertices of the paired darts change, so the composite map agrees with the
//! input maps cell by cell.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use crate::complex::{inverse_boundary, FaceId, TwoComplex};
use crate::error::{ComplexError, ConstructionError};
use crate::graph::{DartId, Graph};
use crate::map::{same_complex, ComplexMap};

use super::pushout::{copair, disjoint_union_all, Offsets};

/// A pair `{e_j1, e_j2}` of darts of `maps[source]` in the fibre of the base
/// dart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandlePair {
    pub source: usize,
    pub first: DartId,
    pub second: DartId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleConfiguration {
    /// The dart `e` of the common target.
    pub edge: DartId,
    pub pairs: Vec<HandlePair>,
}

#[derive(Clone, Debug)]
pub struct Higman {
    pub complex: Arc<TwoComplex>,
    pub map: ComplexMap,
    offsets: Vec<Offsets>,
}

impl Higman {
    /// The dart of the composite replacing dart `d` of summand `i`.
    pub fn dart(&self, i: usize, d: DartId) -> DartId {
        DartId(d.0 + self.offsets[i].dart)
    }

    pub fn vertex(&self, i: usize, v: crate::graph::VertexId) -> crate::graph::VertexId {
        crate::graph::VertexId(v.0 + self.offsets[i].vertex)
    }

    pub fn face(&self, i: usize, f: FaceId) -> FaceId {
        FaceId(f.0 + self.offsets[i].face)
    }
}

fn bad(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::NotHandleConfiguration(msg.into())
}

/// How a face meeting the configuration is rethreaded.
#[derive(Clone, Debug)]
enum Clause {
    /// Boundary `e_{j i}^m`.
    Power { j: usize, side: usize },
    /// Boundary `(e_j1 γ_j1 e_j2 γ_j2)^k` read from position `start`.
    Taco { j: usize, start: usize, period: usize, split: usize },
}

/// The Higman composition of `maps` along `hc`.
#[allow(clippy::needless_range_loop)]
pub fn higman_composition(maps: &[ComplexMap], hc: &HandleConfiguration) -> Result<Higman, ConstructionError> {
    let Some(first) = maps.first() else {
        return Err(bad("no maps given"));
    };
    let x = first.target.clone();
    for m in maps {
        if !same_complex(&m.target, &x) {
            return Err(ComplexError::TargetMismatch.into());
        }
        if !m.is_dimension_preserving() {
            return Err(ComplexError::NotDimensionPreserving.into());
        }
    }
    if !x.graph().has_dart(hc.edge) {
        return Err(ComplexError::UnknownDart(hc.edge).into());
    }
    let m = hc.pairs.len();
    if m == 0 {
        return Err(bad("the configuration has no pairs"));
    }
    let parts: Vec<&TwoComplex> = maps.iter().map(|f| &*f.source).collect();
    let (u, offs) = disjoint_union_all(&parts);
    let ug = u.graph();
    let umap = copair(&Arc::new(u.clone()), &maps.iter().collect::<Vec<_>>());

    // pair darts in the union
    let mut e = vec![[DartId(0); 2]; m];
    let mut used = HashSet::new();
    let mut covered = vec![false; maps.len()];
    for (j, p) in hc.pairs.iter().enumerate() {
        let Some(f) = maps.get(p.source) else {
            return Err(bad(format!("pair {j} names a missing source")));
        };
        let g = f.source.graph();
        for (i, d) in [p.first, p.second].into_iter().enumerate() {
            if !g.has_dart(d) {
                return Err(ComplexError::UnknownDart(d).into());
            }
            if f.dart_image(d) != Some(hc.edge) {
                return Err(bad(format!("dart `{}` is not over the base edge", g.dart_name(d))));
            }
            let ud = DartId(d.0 + offs[p.source].dart);
            if !used.insert(ud) || !used.insert(ug.inv(ud)) {
                return Err(bad(format!("dart `{}` occurs in two pairs", g.dart_name(d))));
            }
            e[j][i] = ud;
        }
        covered[p.source] = true;
    }
    if let Some(i) = covered.iter().position(|c| !c) {
        return Err(bad(format!("complex {i} contains no pair")));
    }
    let pair_of: HashMap<DartId, (usize, usize)> =
        e.iter().enumerate().flat_map(|(j, p)| [(p[0], (j, 0)), (p[1], (j, 1))]).collect();

    // classify faces meeting the configuration, in the orientation that
    // contains the paired darts themselves
    let mut clauses: HashMap<FaceId, Clause> = HashMap::new();
    for f in u.canonical_faces() {
        let fi = u.inv_face(f);
        let hits = |g: FaceId| u.boundary(g).iter().filter(|d| pair_of.contains_key(d)).count();
        let (hf, hi) = (hits(f), hits(fi));
        if hf == 0 && hi == 0 {
            continue;
        }
        if hf > 0 && hi > 0 {
            return Err(bad(format!("face `{}` contains a paired dart and an inverse", u.face_name(f))));
        }
        let phi = if hf > 0 { f } else { fi };
        let b = u.boundary(phi);
        let n = b.len();
        let (j, _) = pair_of[&b.iter().find(|d| pair_of.contains_key(d)).copied().expect("hit")];
        if b.iter().any(|d| pair_of.get(d).is_some_and(|&(jj, _)| jj != j)) {
            return Err(bad(format!("face `{}` meets two pairs", u.face_name(f))));
        }
        let clause = if let Some(side) = (0..2).find(|&s| b.iter().all(|&d| d == e[j][s])) {
            if n != m {
                return Err(bad(format!(
                    "face `{}` is a power {} of a paired dart but there are {m} pairs",
                    u.face_name(f),
                    n
                )));
            }
            Clause::Power { j, side }
        } else {
            let start = b.iter().position(|&d| d == e[j][0]);
            let k = b.iter().filter(|&&d| d == e[j][0]).count();
            let k2 = b.iter().filter(|&&d| d == e[j][1]).count();
            let Some(start) = start else {
                return Err(bad(format!("face `{}` contains only one dart of a pair", u.face_name(f))));
            };
            if k != k2 || n % k != 0 {
                return Err(bad(format!("face `{}` is not of the form (e γ e' γ')^k", u.face_name(f))));
            }
            let period = n / k;
            let rot: Vec<DartId> = (0..n).map(|i| b[(start + i) % n]).collect();
            if (0..n).any(|i| rot[i] != rot[i % period]) {
                return Err(bad(format!("face `{}` is not of the form (e γ e' γ')^k", u.face_name(f))));
            }
            let split = rot[..period].iter().position(|&d| d == e[j][1]);
            let Some(split) = split else {
                return Err(bad(format!("face `{}` is not of the form (e γ e' γ')^k", u.face_name(f))));
            };
            Clause::Taco { j, start, period, split }
        };
        clauses.insert(phi, clause);
    }

    // families: faces of clause (i) grouped by image face; faces of clause
    // (ii) grouped by image face, period and the images of γ1, γ2
    let img = |d: DartId| umap.dart_image(d).expect("dimension preserving");
    let mut power_fam: BTreeMap<(FaceId, usize), Vec<Vec<FaceId>>> = BTreeMap::new();
    let mut taco_fam: BTreeMap<(FaceId, Vec<DartId>, usize), Vec<Vec<FaceId>>> = BTreeMap::new();
    let mut phis: Vec<FaceId> = clauses.keys().copied().collect();
    phis.sort_by(|a, b| u.face_name(*a).cmp(u.face_name(*b)));
    for &phi in &phis {
        let (sigma, _) = umap.face_target(phi).expect("dimension preserving");
        match clauses[&phi] {
            Clause::Power { j, side } => {
                let slot = power_fam.entry((sigma, side)).or_insert_with(|| vec![Vec::new(); m]);
                slot[j].push(phi);
            }
            Clause::Taco { j, start, period, split } => {
                let b = u.boundary(phi);
                let n = b.len();
                let word: Vec<DartId> = (0..period).map(|i| img(b[(start + i) % n])).collect();
                let slot = taco_fam.entry((sigma, word, split)).or_insert_with(|| vec![Vec::new(); m]);
                slot[j].push(phi);
            }
        }
    }
    for ((sigma, _), fam) in &power_fam {
        if fam.iter().any(|v| v.len() != fam[0].len()) {
            return Err(bad(format!(
                "faces over `{}` that are powers of paired darts do not come in complete families",
                x.face_name(*sigma)
            )));
        }
    }
    for ((sigma, _, _), fam) in &taco_fam {
        if fam.iter().any(|v| v.len() != fam[0].len()) {
            return Err(bad(format!(
                "faces over `{}` through the pairs do not come in complete families",
                x.face_name(*sigma)
            )));
        }
    }

    // rewire terminal vertices of the paired darts
    let mut dst: HashMap<DartId, crate::graph::VertexId> = HashMap::new();
    for j in 0..m {
        dst.insert(e[j][0], ug.dst(e[(j + 1) % m][0]));
        dst.insert(e[j][1], ug.dst(e[(j + m - 1) % m][1]));
    }
    let mut src: Vec<usize> = ug.darts().map(|d| ug.src(d).0).collect();
    for (&d, &v) in &dst {
        src[ug.inv(d).0] = v.0;
    }
    let g = Graph::from_raw(
        ug.vertices().map(|v| ug.vertex_name(v).to_string()).collect(),
        ug.darts().map(|d| ug.dart_name(d).to_string()).collect(),
        src,
        ug.darts().map(|d| ug.inv(d).0).collect(),
    );

    // rethread faces through the pairs; boundaries stay aligned so positions keep their images
    let mut new_boundary: HashMap<FaceId, Vec<DartId>> = HashMap::new();
    for ((_, side), fam) in &power_fam {
        for t in 0..fam[0].len() {
            for l in 0..m {
                let phi = fam[l][t];
                let word: Vec<DartId> =
                    (0..m).map(|i| if *side == 0 { e[(l + i) % m][0] } else { e[(l + m - i) % m][1] }).collect();
                new_boundary.insert(phi, word);
            }
        }
    }
    for fam in taco_fam.values() {
        for t in 0..fam[0].len() {
            for l in 0..m {
                let phi = fam[l][t];
                let next = fam[(l + 1) % m][t];
                let Clause::Taco { start, period, split, .. } = clauses[&phi] else { unreachable!() };
                let Clause::Taco { start: s2, .. } = clauses[&next] else { unreachable!() };
                let (b, bn) = (u.boundary(phi), u.boundary(next));
                let n = b.len();
                // e'_l1 γ_{l+1,1} e'_{l+1,2} γ_l2
                let mut per = Vec::with_capacity(period);
                per.push(e[l][0]);
                per.extend((1..split).map(|i| bn[(s2 + i) % n]));
                per.push(e[(l + 1) % m][1]);
                per.extend((split + 1..period).map(|i| b[(start + i) % n]));
                let mut word = vec![DartId(0); n];
                for i in 0..n {
                    word[(start + i) % n] = per[i % period];
                }
                new_boundary.insert(phi, word);
            }
        }
    }
    let faces: Vec<(String, Vec<DartId>)> = u
        .canonical_faces()
        .map(|f| {
            let b = if let Some(w) = new_boundary.get(&f) {
                w.clone()
            } else if let Some(w) = new_boundary.get(&u.inv_face(f)) {
                inverse_boundary(&g, w)
            } else {
                u.boundary(f).to_vec()
            };
            (u.face_name(f).to_string(), b)
        })
        .collect();
    let y = Arc::new(TwoComplex::from_raw(g, faces));
    let report = crate::complex::validate_complex(&y);
    if !report.is_valid() {
        return Err(bad(format!("composite is not a complex: {report}")));
    }
    let map = ComplexMap { source: y.clone(), target: x, vmap: umap.vmap, dmap: umap.dmap, fmap: umap.fmap };
    Ok(Higman { complex: y, map, offsets: offs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::{components, is_connected};
    use crate::map::validate_map;

    fn pair(m: &ComplexMap, i: usize, a: &str, b: &str) -> HandlePair {
        let g = m.source.graph();
        HandlePair { source: i, first: g.dart_by_name(a).unwrap(), second: g.dart_by_name(b).unwrap() }
    }

    #[test]
    fn lollipop_splice_disconnects() {
        let (f1, f2) = (corpus::lollipop_cover("l"), corpus::lollipop_cover("r"));
        let hc = HandleConfiguration {
            edge: DartId(0),
            pairs: vec![pair(&f1, 0, "a1l", "a2l"), pair(&f2, 1, "a1r", "a2r")],
        };
        let h = higman_composition(&[f1, f2], &hc).unwrap();
        assert_eq!(components(h.complex.graph()).len(), 2);
        assert_eq!(h.complex.num_darts(), 16);
        assert!(validate_map(&h.map).is_valid());
    }

    #[test]
    fn cyclic_splice_keeps_total_degree() {
        let (c2, c3) = (corpus::cyc_cover(2), corpus::cyc_cover(3));
        let hc =
            HandleConfiguration { edge: DartId(0), pairs: vec![pair(&c2, 0, "a0", "a1"), pair(&c3, 1, "a0", "a1")] };
        let h = higman_composition(&[c2, c3], &hc).unwrap();
        assert_eq!(h.complex.num_vertices(), 5);
        assert_eq!(components(h.complex.graph()).len(), 2);
    }

    #[test]
    fn single_parallel_pair_is_a_self_splice() {
        let c2 = corpus::cyc_cover(2);
        let hc = HandleConfiguration { edge: DartId(0), pairs: vec![pair(&c2, 0, "a0", "a1")] };
        let h = higman_composition(std::slice::from_ref(&c2), &hc).unwrap();
        assert!(is_connected(h.complex.graph()));
        assert!(crate::map::are_isomorphic(&h.complex, &c2.source));
    }

    #[test]
    fn pairs_must_lie_over_the_edge() {
        let f = corpus::lollipop_cover("l");
        let hc = HandleConfiguration { edge: DartId(0), pairs: vec![pair(&f, 0, "a1l", "b1l")] };
        assert!(matches!(higman_composition(&[f], &hc), Err(ConstructionError::NotHandleConfiguration(_))));
    }

    #[test]
    fn faces_are_rethreaded() {
        let (f, g) = (corpus::sph2_rp2(), corpus::sph2_rp2());
        let hc = HandleConfiguration { edge: DartId(0), pairs: vec![pair(&f, 0, "e1", "e2"), pair(&g, 1, "e1", "e2")] };
        let h = higman_composition(&[f, g], &hc).unwrap();
        assert!(validate_map(&h.map).is_valid());
        assert_eq!(h.complex.num_face_pairs(), 4);
        assert_eq!(components(h.complex.graph()).len(), 2);
    }
}
