use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn covers(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covers")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ok(args: &[&str]) -> String {
    let o = covers(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn validate_shipped_files() {
    for f in [
        "rp2.cx",
        "sph2_rp2.cx",
        "torus.cx",
        "cyc4.cx",
        "pullback.cx",
        "pushout_obstruction.cx",
        "fold.cx",
        "higman.cx",
        "lollipop.cx",
        "irregular.cx",
        "s3.cx",
        "excision.cx",
    ] {
        ok(&["validate", &data(f)]);
    }
}

#[test]
fn degree_of_sphere_cover() {
    assert_eq!(ok(&["degree", "--map", "f", &data("sph2_rp2.cx")]).trim(), "2");
}

#[test]
fn galois_order_of_sphere_cover() {
    let out = ok(&["galois", "--map", "f", &data("sph2_rp2.cx")]);
    assert!(out.lines().any(|l| l == "order 2"), "{out}");
}

#[test]
fn broken_offset_is_a_domain_error() {
    let o = covers(&["check-cover", "--map", "broken", &data("sph2_rp2.cx")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("C3"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(covers(&["degree", &data("sph2_rp2.cx")]).status.code(), Some(2));
    assert_eq!(covers(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn missing_file_and_unknown_map_are_domain_errors() {
    assert_eq!(covers(&["validate", "no/such/file.cx"]).status.code(), Some(1));
    assert_eq!(covers(&["degree", "--map", "zz", &data("rp2.cx")]).status.code(), Some(1));
}

#[test]
fn pullback_has_six_faces() {
    let out = ok(&["pullback", "--map", "f", "--map", "g", &data("pullback.cx")]);
    let block: Vec<&str> = out.split("\n\n").next().unwrap().lines().collect();
    let count = |kw: &str| block.iter().filter(|l| l.starts_with(kw)).count();
    assert_eq!((count("vertex "), count("edge "), count("face ")), (6, 6, 6));
}

#[test]
fn pushout_obstruction_and_fold() {
    let o = covers(&["pushout", "--map", "f", "--map", "g", "--shared", &data("pushout_obstruction.cx")]);
    assert_eq!(o.status.code(), Some(1));
    let out = ok(&["pushout", "--map", "f", "--map", "g", "--shared", &data("fold.cx")]);
    let block = out.split("\n\n").next().unwrap();
    assert_eq!(block.lines().filter(|l| l.starts_with("edge ")).count(), 1);
}

#[test]
fn higman_output_is_a_cover_of_degree_four() {
    let dir = std::env::temp_dir().join(format!("covers-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("higman.cx");
    ok(&[
        "higman",
        "--edge",
        "a",
        "--pair",
        "f:a0:a1",
        "--pair",
        "g:a0:a1",
        "--out",
        out.to_str().unwrap(),
        &data("higman.cx"),
    ]);
    assert_eq!(ok(&["degree", "--map", "higman", out.to_str().unwrap()]).trim(), "4");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn lattice_and_is_galois() {
    let out = ok(&["lattice", "--map", "f", &data("s3.cx")]);
    assert!(out.starts_with("6 classes"));
    assert_eq!(out.lines().filter(|l| l.contains(" < ")).count(), 8);
    let out = ok(&["is-galois", "--map", "f", &data("irregular.cx")]);
    assert!(out.starts_with("not galois"));
    let o = covers(&["lattice", "--map", "f", &data("irregular.cx")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn universal_covers() {
    let out = ok(&["universal", "--complex", "rp2", &data("rp2.cx")]);
    assert!(out.contains("map universal universal rp2"));
    let o = covers(&["universal", "--complex", "torus", "--radius", "2", &data("torus.cx")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("13 vertices"));
}

#[test]
fn enumeration_and_monodromy() {
    let out = ok(&["enumerate", "--complex", "torus", "--subgroup", "a a", "--subgroup", "b", &data("torus.cx")]);
    assert!(out.contains("index 2"));
    let out = ok(&["monodromy", "--map", "f", &data("irregular.cx")]);
    assert!(out.contains("a: (0 1)"));
    let out = ok(&["lift-path", "--map", "f", "--base", "v1", &data("sph2_rp2.cx"), "e", "e"]);
    assert!(out.contains("ends at v1"));
}

#[test]
fn inverse_galois_and_dot_are_deterministic() {
    let args = ["inverse-galois", "--degree", "4", "--gen", "(0 1)(2 3)", "--gen", "(0 2)(1 3)"];
    assert_eq!(ok(&args), ok(&args));
    let dot = ok(&["dot", "--map", "f", &data("cyc4.cx")]);
    assert_eq!(dot, ok(&["dot", "--map", "f", &data("cyc4.cx")]));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 5);
    let dot = ok(&["dot", "--complex", "loop1", &data("cyc4.cx")]);
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 1);
}

#[test]
fn excision_and_quotients() {
    let out = ok(&["excise", "--map", "f", "--cells", "p", &data("excision.cx")]);
    assert!(out.contains("map excised cover base"));
    let out = ok(&["quotient-sub", "--complex", "x", "--part", "a", &data("fold.cx")]);
    assert!(out.contains("e a -> v:u"));
    let out = ok(&["bottom-up", "--complex", "torus", "--subgroup", "a a", "--subgroup", "b", &data("torus.cx")]);
    assert!(out.contains("map cover cover torus"));
}

#[test]
fn antipodal_quotient_is_a_double_cover() {
    let dir = std::env::temp_dir().join(format!("covers-cli-q-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("q.cx");
    ok(&["quotient-group", "--map", "antipodal", "--out", out.to_str().unwrap(), &data("sph2_rp2.cx")]);
    assert_eq!(ok(&["degree", "--map", "quotient", out.to_str().unwrap()]).trim(), "2");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn lifting_a_cover_through_itself_is_a_rotation() {
    let out = ok(&["lift-map", "--map", "f", "--along", "f", "--from", "v0", "--base", "v1", &data("cyc4.cx")]);
    assert!(out.contains("v v0 -> v1"));
    assert!(out.contains("e a3 -> a0"));
}
