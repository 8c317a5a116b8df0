//! Graphviz export for complexes, maps and lattices.

use std::fmt::Write as _;

use crate::complex::TwoComplex;
use crate::galois::Correspondence;
use crate::map::ComplexMap;
use crate::permgroup::{hasse_edges, SubgroupLattice};

const PALETTE: [&str; 8] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn body(out: &mut String, x: &TwoComplex, prefix: &str, indent: &str, colors: Option<&[usize]>) {
    let g = x.graph();
    for v in g.vertices() {
        let id = quote(&format!("{prefix}{}", g.vertex_name(v)));
        match colors {
            Some(c) => writeln!(
                out,
                "{indent}{id} [label={}, style=filled, fillcolor=\"{}\"];",
                quote(g.vertex_name(v)),
                color(c[v.0])
            ),
            None => writeln!(out, "{indent}{id} [label={}];", quote(g.vertex_name(v))),
        }
        .unwrap();
    }
    for a in g.arcs() {
        writeln!(
            out,
            "{indent}{} -> {} [label={}];",
            quote(&format!("{prefix}{}", g.vertex_name(g.src(a)))),
            quote(&format!("{prefix}{}", g.vertex_name(g.dst(a)))),
            quote(g.dart_name(a))
        )
        .unwrap();
    }
}

/// One node per vertex and one directed edge per arc. Faces are listed in
/// the graph label.
pub fn complex_to_dot(name: &str, x: &TwoComplex) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    let faces: Vec<String> =
        x.canonical_faces().map(|f| format!("{}: {}", x.face_name(f), x.boundary_names(f).join(" "))).collect();
    if !faces.is_empty() {
        writeln!(out, "  label={};", quote(&faces.join("\\n"))).unwrap();
    }
    body(&mut out, x, "", "  ", None);
    out.push_str("}\n");
    out
}

/// Source and target in separate clusters; each source vertex has the
/// colour of its image.
pub fn map_to_dot(name: &str, m: &ComplexMap) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    let tcolors: Vec<usize> = m.target.graph().vertices().map(|v| v.0).collect();
    let scolors: Vec<usize> = m.source.graph().vertices().map(|v| m.vertex(v).0).collect();
    out.push_str("  subgraph cluster_source {\n    label=\"source\";\n");
    body(&mut out, &m.source, "s:", "    ", Some(&scolors));
    out.push_str("  }\n  subgraph cluster_target {\n    label=\"target\";\n");
    body(&mut out, &m.target, "t:", "    ", Some(&tcolors));
    out.push_str("  }\n}\n");
    out
}

/// Hasse diagram of a finite poset, smaller elements at the bottom.
pub fn hasse_to_dot(name: &str, labels: &[String], leq: &[Vec<bool>]) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=BT;\n", quote(name));
    for (i, l) in labels.iter().enumerate() {
        writeln!(out, "  n{i} [label={}];", quote(l)).unwrap();
    }
    for (i, j) in hasse_edges(leq) {
        writeln!(out, "  n{i} -> n{j};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Subgroups labelled by their orders.
pub fn lattice_to_dot(name: &str, l: &SubgroupLattice) -> String {
    let labels: Vec<String> = l.subgroups.iter().enumerate().map(|(i, h)| format!("H{i} |{}|", h.order())).collect();
    hasse_to_dot(name, &labels, &l.leq)
}

/// Intermediate covers labelled by their degrees over the base.
pub fn correspondence_to_dot(name: &str, c: &Correspondence) -> String {
    let labels: Vec<String> = c.covers.iter().enumerate().map(|(i, z)| format!("Z{i} deg {}", z.degree())).collect();
    hasse_to_dot(name, &labels, &c.cover_leq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::permgroup::{subgroup_lattice, PermGroup, Permutation};

    fn count(s: &str) -> (usize, usize) {
        let edges = s.lines().filter(|l| l.contains("->")).count();
        let nodes = s.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
        (nodes, edges)
    }

    #[test]
    fn loop_complex() {
        assert_eq!(count(&complex_to_dot("x", &corpus::loop1())), (1, 1));
    }

    #[test]
    fn cycle_cover_map() {
        let d = map_to_dot("f", &corpus::cyc_cover(4));
        assert_eq!(count(&d), (5, 5));
        assert_eq!(d, map_to_dot("f", &corpus::cyc_cover(4)));
    }

    #[test]
    fn symmetric_group_hasse() {
        let g = PermGroup::closure(
            3,
            &[Permutation::from_cycles(3, &[&[0, 1]]).unwrap(), Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()],
        )
        .unwrap();
        let l = subgroup_lattice(&g).unwrap();
        assert_eq!(count(&lattice_to_dot("s3", &l)), (6, 8));
    }
}
