use std::path::PathBuf;

use covers::corpus;
use covers::io::{parse_cx, write_cx, CxDocument};
use covers::map::validate_map;

fn load(name: &str) -> (String, CxDocument) {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    let text = std::fs::read_to_string(&p).unwrap();
    let doc = parse_cx(&text).unwrap();
    (text, doc)
}

#[test]
fn every_file_round_trips() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data"].iter().collect();
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".cx"))
        .collect();
    names.sort();
    assert!(names.len() >= 12);
    for n in names {
        let (_, doc) = load(&n);
        let again = parse_cx(&write_cx(&doc)).unwrap();
        assert_eq!(again, doc, "{n}");
        for (m, e) in &doc.maps {
            assert!(validate_map(&e.map).is_valid(), "{n}: {m}");
        }
    }
}

#[test]
fn files_match_the_corpus() {
    let (_, d) = load("rp2.cx");
    assert_eq!(**d.complex("rp2").unwrap(), corpus::rp2());
    let (_, d) = load("sph2_rp2.cx");
    assert_eq!(d.map("f").unwrap(), &corpus::sph2_rp2());
    assert_eq!(d.map("broken").unwrap(), &corpus::sph2_rp2_broken());
    let (_, d) = load("torus.cx");
    assert_eq!(**d.complex("torus").unwrap(), corpus::torus());
    let (_, d) = load("cyc4.cx");
    assert_eq!(d.map("f").unwrap(), &corpus::cyc_cover(4));
    let (_, d) = load("pullback.cx");
    let (f, g) = corpus::pullback_figure();
    assert_eq!((d.map("f").unwrap(), d.map("g").unwrap()), (&f, &g));
    let (_, d) = load("irregular.cx");
    assert_eq!(d.map("f").unwrap(), &corpus::irregular_cover());
    let (_, d) = load("excision.cx");
    assert_eq!(d.map("f").unwrap(), &corpus::sph2_subdivided_cover());
}

#[test]
fn writing_is_canonical() {
    // comments and spacing are dropped, cells keep their order
    let text = "complex c   # a circle\n\nvertex p\n  vertex q\nedge x p q\nedge y q p\n";
    let doc = parse_cx(text).unwrap();
    assert_eq!(write_cx(&doc), "complex c\nvertex p\nvertex q\nedge x p q\nedge y q p\n");
}
