//! The line-oriented `.cx` text format.
//!
//! ```text
//! # the projective plane
//! complex rp2
//! vertex v
//! edge e v v
//! face s e e
//!
//! map f sph2 rp2
//!   v v1 -> v
//!   e e1 -> e
//!   e t -> v:v        # collapse
//!   f s1 -> s @0
//!   f s2 -> path e e  # face onto a path
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::complex::TwoComplex;
use crate::graph::{DartImage, Path, VertexId};
use crate::map::{ComplexMap, FaceImage, MapBuilder};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: expected {expected}")]
pub struct ParseError {
    pub line: usize,
    pub expected: String,
}

fn err(line: usize, expected: impl Into<String>) -> ParseError {
    ParseError { line, expected: expected.into() }
}

/// A map together with the names of its source and target complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapEntry {
    pub source: String,
    pub target: String,
    pub map: ComplexMap,
}

/// Named complexes and maps, in file order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CxDocument {
    pub complexes: IndexMap<String, Arc<TwoComplex>>,
    pub maps: IndexMap<String, MapEntry>,
}

impl CxDocument {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn complex(&self, name: &str) -> Option<&Arc<TwoComplex>> {
        self.complexes.get(name)
    }

    pub fn map(&self, name: &str) -> Option<&ComplexMap> {
        self.maps.get(name).map(|e| &e.map)
    }

    pub fn add_complex(&mut self, name: impl Into<String>, x: Arc<TwoComplex>) {
        self.complexes.insert(name.into(), x);
    }

    /// Adds a map, registering its source and target under the given names
    /// unless complexes of those names are already present.
    pub fn add_map(&mut self, name: impl Into<String>, source: &str, target: &str, m: ComplexMap) {
        self.complexes.entry(source.to_string()).or_insert_with(|| m.source.clone());
        self.complexes.entry(target.to_string()).or_insert_with(|| m.target.clone());
        self.maps.insert(name.into(), MapEntry { source: source.into(), target: target.into(), map: m });
    }
}

enum MapLine {
    Vertex(String, String),
    Dart(String, String),
    Collapse(String, String),
    Face(String, String, usize),
    FacePath(String, Vec<String>),
}

struct PendingMap {
    name: String,
    source: String,
    target: String,
    line: usize,
    lines: Vec<(usize, MapLine)>,
}

enum Block {
    None,
    Complex(String, Box<TwoComplex>),
    Map(Box<PendingMap>),
}

fn finish(doc: &mut CxDocument, block: Block) -> Result<(), ParseError> {
    match block {
        Block::None => Ok(()),
        Block::Complex(name, x) => {
            doc.complexes.insert(name, Arc::new(*x));
            Ok(())
        }
        Block::Map(p) => {
            let m = build_map(doc, &p)?;
            doc.maps.insert(p.name.clone(), MapEntry { source: p.source, target: p.target, map: m });
            Ok(())
        }
    }
}

fn build_map(doc: &CxDocument, p: &PendingMap) -> Result<ComplexMap, ParseError> {
    let src = doc.complexes.get(&p.source).ok_or_else(|| err(p.line, format!("known complex `{}`", p.source)))?;
    let tgt = doc.complexes.get(&p.target).ok_or_else(|| err(p.line, format!("known complex `{}`", p.target)))?;
    let mut b = MapBuilder::new(src.clone(), tgt.clone());
    let mut paths = Vec::new();
    for (line, l) in &p.lines {
        let r = match l {
            MapLine::Vertex(a, c) => b.vertex(a, c).map(|_| ()),
            MapLine::Dart(a, c) => b.dart(a, c).map(|_| ()),
            MapLine::Collapse(a, c) => b.collapse(a, c).map(|_| ()),
            MapLine::Face(a, c, k) => {
                // offsets are taken mod the target boundary length
                let n = tgt.face_by_name(c).map_or(1, |f| tgt.face_len(f));
                b.face(a, c, k % n).map(|_| ())
            }
            MapLine::FacePath(a, w) => {
                paths.push((*line, a, w));
                Ok(())
            }
        };
        r.map_err(|e| err(*line, format!("a resolvable map line ({e})")))?;
    }
    if paths.is_empty() {
        return b.build().map_err(|e| err(p.line, format!("a complete map ({e})")));
    }
    // face paths start at the image of their first boundary vertex
    let mut faces = Vec::new();
    let mut probe = b.clone();
    for (line, a, w) in paths {
        let f = src.face_by_name(a).ok_or_else(|| err(line, format!("a face of `{}`", p.source)))?;
        probe.set_face(f, FaceImage::Path(Path::empty(VertexId(0))));
        faces.push((line, f, w));
    }
    let partial = probe.build().map_err(|e| err(p.line, format!("a complete map ({e})")))?;
    for (line, f, w) in faces {
        let start = partial.vertex(src.graph().src(src.boundary(f)[0]));
        let darts = w
            .iter()
            .map(|d| tgt.graph().dart_by_name(d).ok_or_else(|| err(line, format!("a dart of `{}`", p.target))))
            .collect::<Result<Vec<_>, _>>()?;
        b.set_face(f, FaceImage::Path(Path::new(start, darts)));
    }
    b.build().map_err(|e| err(p.line, format!("a complete map ({e})")))
}

fn arrow<'a>(toks: &'a [&'a str], line: usize) -> Result<(&'a str, &'a [&'a str]), ParseError> {
    match toks {
        [a, "->", rest @ ..] if !rest.is_empty() => Ok((a, rest)),
        _ => Err(err(line, "`NAME -> IMAGE`")),
    }
}

/// Parses a `.cx` document.
pub fn parse_cx(text: &str) -> Result<CxDocument, ParseError> {
    let mut doc = CxDocument::new();
    let mut block = Block::None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&kw, args)) = toks.split_first() else { continue };
        match kw {
            "complex" => {
                let [name] = args else { return Err(err(line, "`complex NAME`")) };
                finish(&mut doc, std::mem::replace(&mut block, Block::None))?;
                if doc.complexes.contains_key(*name) {
                    return Err(err(line, format!("a new complex name, `{name}` is taken")));
                }
                block = Block::Complex(name.to_string(), Box::default());
            }
            "map" => {
                let [name, s, t] = args else { return Err(err(line, "`map NAME SRC DST`")) };
                finish(&mut doc, std::mem::replace(&mut block, Block::None))?;
                if doc.maps.contains_key(*name) {
                    return Err(err(line, format!("a new map name, `{name}` is taken")));
                }
                block = Block::Map(Box::new(PendingMap {
                    name: name.to_string(),
                    source: s.to_string(),
                    target: t.to_string(),
                    line,
                    lines: Vec::new(),
                }));
            }
            "vertex" | "edge" | "face" => {
                let Block::Complex(_, x) = &mut block else {
                    return Err(err(line, "`complex NAME` before cells"));
                };
                let r = match (kw, args) {
                    ("vertex", [v]) => x.add_vertex(*v).map(|_| ()),
                    ("edge", [e, s, t]) => {
                        let g = x.graph();
                        let (Some(s), Some(t)) = (g.vertex_by_name(s), g.vertex_by_name(t)) else {
                            return Err(err(line, "declared endpoint vertices"));
                        };
                        x.add_edge(*e, s, t).map(|_| ())
                    }
                    ("face", [f, word @ ..]) if !word.is_empty() => x.add_face_named(f, word).map(|_| ()),
                    ("vertex", _) => return Err(err(line, "`vertex ID`")),
                    ("edge", _) => return Err(err(line, "`edge ID SRC DST`")),
                    _ => return Err(err(line, "`face ID W1 W2 ...` with a nonempty word")),
                };
                r.map_err(|e| err(line, format!("a valid cell ({e})")))?;
            }
            "v" | "e" | "f" => {
                let Block::Map(p) = &mut block else {
                    return Err(err(line, "`map NAME SRC DST` before map lines"));
                };
                let (a, rhs) = arrow(args, line)?;
                let entry = match (kw, rhs) {
                    ("v", [b]) => MapLine::Vertex(a.into(), b.to_string()),
                    ("e", [b]) => match b.strip_prefix("v:") {
                        Some(v) => MapLine::Collapse(a.into(), v.into()),
                        None => MapLine::Dart(a.into(), b.to_string()),
                    },
                    ("f", ["path", w @ ..]) => MapLine::FacePath(a.into(), w.iter().map(|s| s.to_string()).collect()),
                    ("f", [g, k]) => {
                        let k = k
                            .strip_prefix('@')
                            .and_then(|k| k.parse::<usize>().ok())
                            .ok_or_else(|| err(line, "an offset `@K`"))?;
                        MapLine::Face(a.into(), g.to_string(), k)
                    }
                    ("v", _) => return Err(err(line, "`v A -> B`")),
                    ("e", _) => return Err(err(line, "`e D -> D2` or `e D -> v:B`")),
                    _ => return Err(err(line, "`f F -> G @K` or `f F -> path D1 ...`")),
                };
                p.lines.push((line, entry));
            }
            other => return Err(err(line, format!("a keyword, found `{other}`"))),
        }
    }
    finish(&mut doc, block)?;
    Ok(doc)
}

/// Writes the complex in canonical form: vertices, arcs (forward darts) and
/// canonical faces in id order.
pub fn write_complex(out: &mut String, name: &str, x: &TwoComplex) {
    let g = x.graph();
    writeln!(out, "complex {name}").unwrap();
    for v in g.vertices() {
        writeln!(out, "vertex {}", g.vertex_name(v)).unwrap();
    }
    for a in g.arcs() {
        writeln!(out, "edge {} {} {}", g.dart_name(a), g.vertex_name(g.src(a)), g.vertex_name(g.dst(a))).unwrap();
    }
    for f in x.canonical_faces() {
        writeln!(out, "face {} {}", x.face_name(f), x.boundary_names(f).join(" ")).unwrap();
    }
}

pub fn write_map(out: &mut String, name: &str, e: &MapEntry) {
    let m = &e.map;
    let (x, y) = (&*m.source, &*m.target);
    let (sg, tg) = (x.graph(), y.graph());
    writeln!(out, "map {name} {} {}", e.source, e.target).unwrap();
    for v in sg.vertices() {
        writeln!(out, "  v {} -> {}", sg.vertex_name(v), tg.vertex_name(m.vertex(v))).unwrap();
    }
    for a in sg.arcs() {
        match m.dart(a) {
            DartImage::Dart(d) => writeln!(out, "  e {} -> {}", sg.dart_name(a), tg.dart_name(d)),
            DartImage::Vertex(v) => writeln!(out, "  e {} -> v:{}", sg.dart_name(a), tg.vertex_name(v)),
        }
        .unwrap();
    }
    for f in x.canonical_faces() {
        match m.face(f) {
            FaceImage::Face { face, offset } => {
                writeln!(out, "  f {} -> {} @{offset}", x.face_name(f), y.face_name(*face))
            }
            FaceImage::Path(p) => {
                let w: Vec<&str> = p.darts.iter().map(|d| tg.dart_name(*d)).collect();
                writeln!(out, "  f {} -> path {}", x.face_name(f), w.join(" "))
            }
        }
        .unwrap();
    }
}

/// Writes every complex, then every map, separated by blank lines.
pub fn write_cx(doc: &CxDocument) -> String {
    let mut out = String::new();
    let mut first = true;
    for (name, x) in &doc.complexes {
        if !std::mem::take(&mut first) {
            out.push('\n');
        }
        write_complex(&mut out, name, x);
    }
    for (name, e) in &doc.maps {
        if !std::mem::take(&mut first) {
            out.push('\n');
        }
        write_map(&mut out, name, e);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    const RP2: &str = "# projective plane\ncomplex rp2\nvertex v\nedge e v v\nface s e e\n";

    #[test]
    fn parses_rp2() {
        let doc = parse_cx(RP2).unwrap();
        assert_eq!(**doc.complex("rp2").unwrap(), corpus::rp2());
    }

    #[test]
    fn round_trip() {
        let mut doc = CxDocument::new();
        doc.add_map("f", "sph2", "rp2", corpus::sph2_rp2());
        doc.add_map("h", "y", "x", corpus::hexagon_cover(3));
        let text = write_cx(&doc);
        let back = parse_cx(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(write_cx(&back), text);
    }

    #[test]
    fn collapses_and_paths() {
        let text = "complex a\nvertex p\nvertex q\nedge t p q\nedge l q q\nface d l\n\
                    complex b\nvertex v\nedge e v v\n\
                    map m a b\n  e t -> v:v\n  e l -> v:v\n  f d -> path\n";
        let doc = parse_cx(text).unwrap();
        let m = doc.map("m").unwrap();
        assert!(crate::map::validate_map(m).is_valid());
        assert_eq!(parse_cx(&write_cx(&doc)).unwrap(), doc);
    }

    #[test]
    fn malformed_face_word() {
        let e = parse_cx("complex x\nvertex v\nedge e v v\nface s e z\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_cx("complex x\nvertex v\nface s\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn map_errors_carry_lines() {
        let e = parse_cx(&format!("{RP2}map f rp2 rp2\n  e e -> q\n")).unwrap_err();
        assert_eq!(e.line, 7);
        let e = parse_cx(&format!("{RP2}map f rp2 rp2\n  f s -> s 1\n")).unwrap_err();
        assert_eq!(e.line, 7);
        let e = parse_cx("edge e v v\n").unwrap_err();
        assert_eq!(e.line, 1);
    }
}
