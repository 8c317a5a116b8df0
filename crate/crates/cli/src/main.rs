use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use covers::complex::{validate_complex, Subcomplex, TwoComplex};
use covers::constructions::{
    higman_composition, pullback, pushout, quotient_by_group_action, quotient_by_subcomplexes, GroupAction,
    HandleConfiguration, HandlePair, PushoutMode,
};
use covers::covering::{
    bottom_up_cover, check_covering, coset_enumerate, excise, monodromy, universal_cover, ComplexPresentation,
    CoveringCert, TableStatus, UniversalBounds, UniversalCover, DEFAULT_MAX_COSETS,
};
use covers::galois::{galois_group, intermediate_lattice, inverse_galois, is_galois};
use covers::graph::VertexId;
use covers::homotopy::HomotopyBounds;
use covers::io::{self, parse_cx, write_cx, CxDocument};
use covers::map::{validate_map_with, ComplexMap};
use covers::permgroup::Permutation;

/// Combinatorial 2-complexes, coverings and the Galois correspondence.
#[derive(Parser)]
#[command(name = "covers", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// A `.cx` document.
    file: PathBuf,
}

#[derive(Args)]
struct MapArg {
    /// Name of the map in the document.
    #[arg(long)]
    map: String,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Bounds {
    /// Longest intermediate word in homotopy searches.
    #[arg(long)]
    max_len: Option<usize>,
    /// Number of face moves in homotopy searches.
    #[arg(long)]
    max_moves: Option<usize>,
}

impl Bounds {
    fn homotopy(&self) -> HomotopyBounds {
        let d = HomotopyBounds::default();
        HomotopyBounds {
            max_len: self.max_len.unwrap_or(d.max_len),
            max_moves: self.max_moves.unwrap_or(d.max_moves),
            ..d
        }
    }
}

#[derive(Args)]
struct PresentationArgs {
    /// The complex to present.
    #[arg(long)]
    complex: String,
    /// Base vertex; defaults to the first vertex.
    #[arg(long)]
    base: Option<String>,
    /// Subgroup generators, as generator words (`a b^`) or dart paths.
    #[arg(long = "subgroup")]
    subgroup: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
    max_cosets: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check every complex and map of a document.
    Validate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Certify a map as a covering, or report the first failing condition.
    CheckCover {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        map: MapArg,
    },
    /// Degree of a covering.
    Degree {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        map: MapArg,
    },
    /// Lift a path of the base, given by dart names, starting at `--base`.
    LiftPath {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        map: MapArg,
        /// Start vertex of the lift, in the total complex.
        #[arg(long)]
        base: String,
        /// Darts of the path in the base.
        #[arg(required = true)]
        darts: Vec<String>,
    },
    /// Lift a map into the base through a covering.
    LiftMap {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        map: MapArg,
        /// The map to lift.
        #[arg(long)]
        along: String,
        /// Base vertex of the source of `--along`.
        #[arg(long)]
        from: String,
        /// Its prescribed image in the total complex.
        #[arg(long)]
        base: String,
        #[command(flatten)]
        out: Output,
    },
    /// Pushout of two maps with a common source.
    Pushout {
        #[command(flatten)]
        input: Input,
        /// The two maps.
        #[arg(long, num_args = 1, required = true)]
        map: Vec<String>,
        /// Both maps land in one complex, which is folded onto itself.
        #[arg(long)]
        shared: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Pullback of two maps with a common target.
    Pullback {
        #[command(flatten)]
        input: Input,
        /// The two maps.
        #[arg(long, num_args = 1, required = true)]
        map: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Splice covers along pairs of arcs over a common base arc.
    Higman {
        #[command(flatten)]
        input: Input,
        /// The base arc.
        #[arg(long)]
        edge: String,
        /// A pair `MAP:DART:DART`; maps are numbered by first appearance.
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Quotient by the group generated by automorphisms given as maps.
    QuotientGroup {
        #[command(flatten)]
        input: Input,
        /// Generating automorphisms.
        #[arg(long, num_args = 1, required = true)]
        map: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Collapse disjoint subcomplexes, each to a point.
    QuotientSub {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        complex: String,
        /// Comma separated cell names of one part; repeat for more parts.
        #[arg(long = "part", required = true)]
        parts: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Excise a simply connected subcomplex of the base of a covering.
    Excise {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        map: MapArg,
        /// Comma separated cell names of the base.
        #[arg(long)]
        cells: String,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        out: Output,
    },
    /// Monodromy permutations of the generators.
    Monodromy {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        map: MapArg,
        /// Base vertex; defaults to the first vertex.
        #[arg(long)]
        base: Option<String>,
    },
    /// Coset enumeration for a subgroup of the fundamental group.
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pres: PresentationArgs,
    },
    /// The covering for a finite index subgroup.
    BottomUp {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pres: PresentationArgs,
        #[command(flatten)]
        out: Output,
    },
    /// The universal cover, or a ball of it when it is too large.
    Universal {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        complex: String,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[command(flatten)]
        out: Output,
    },
    /// The Galois group of a covering.
    Galois {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        map: MapArg,
        #[arg(long)]
        base: Option<String>,
    },
    /// Whether a covering is Galois.
    IsGalois {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        map: MapArg,
    },
    /// Intermediate covers of a Galois covering.
    Lattice {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        map: MapArg,
        /// Print the Hasse diagram in DOT.
        #[arg(long)]
        dot: bool,
    },
    /// A Galois graph cover with a given permutation group.
    InverseGalois {
        /// Number of points permuted.
        #[arg(long)]
        degree: usize,
        /// A generator in cycle notation, e.g. `(0 1)(2 3)`.
        #[arg(long = "gen")]
        gens: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Graphviz export of a complex, a map or a lattice.
    Dot {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "lattice")]
        complex: Option<String>,
        #[arg(long, conflicts_with = "lattice")]
        map: Option<String>,
        /// Hasse diagram of the intermediate covers of this map.
        #[arg(long)]
        lattice: Option<String>,
        #[command(flatten)]
        out: Output,
    },
}

fn load(input: &Input) -> Result<CxDocument> {
    let text = std::fs::read_to_string(&input.file).with_context(|| format!("reading {}", input.file.display()))?;
    parse_cx(&text).with_context(|| format!("parsing {}", input.file.display()))
}

fn get_map<'a>(doc: &'a CxDocument, name: &str) -> Result<&'a ComplexMap> {
    doc.map(name).ok_or_else(|| anyhow!("no map named `{name}`"))
}

fn get_complex<'a>(doc: &'a CxDocument, name: &str) -> Result<&'a Arc<TwoComplex>> {
    doc.complex(name).ok_or_else(|| anyhow!("no complex named `{name}`"))
}

fn cover(doc: &CxDocument, name: &str) -> Result<CoveringCert> {
    Ok(check_covering(get_map(doc, name)?)?)
}

fn vertex(x: &TwoComplex, name: Option<&str>) -> Result<VertexId> {
    let g = x.graph();
    match name {
        Some(n) => g.vertex_by_name(n).ok_or_else(|| anyhow!("no vertex named `{n}`")),
        None => g.vertices().next().ok_or_else(|| anyhow!("the complex has no vertices")),
    }
}

fn emit(out: &Output, text: &str) -> Result<()> {
    match &out.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_perm(degree: usize, s: &str) -> Result<Permutation> {
    let mut cycles = Vec::new();
    for part in s.split(')') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let body = part.strip_prefix('(').ok_or_else(|| anyhow!("expected `(` in `{s}`"))?;
        let c = body
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().with_context(|| format!("bad point `{t}`")))
            .collect::<Result<Vec<_>>>()?;
        cycles.push(c);
    }
    let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
    Ok(Permutation::from_cycles(degree, &refs)?)
}

fn two_maps<'a>(doc: &'a CxDocument, names: &[String]) -> Result<(&'a ComplexMap, &'a ComplexMap)> {
    let [a, b] = names else { bail!("expected exactly two `--map` arguments") };
    Ok((get_map(doc, a)?, get_map(doc, b)?))
}

fn presentation(doc: &CxDocument, p: &PresentationArgs) -> Result<(ComplexPresentation, covers::covering::CosetTable)> {
    let x = get_complex(doc, &p.complex)?;
    let base = vertex(x, p.base.as_deref())?;
    let cp = ComplexPresentation::new(x.clone(), base)?;
    let words = p.subgroup.iter().map(|w| cp.parse_subgroup_word(w)).collect::<Result<Vec<_>, _>>()?;
    let table = coset_enumerate(&cp.presentation, &words, p.max_cosets)?;
    Ok((cp, table))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { input, bounds } => {
            let doc = load(&input)?;
            let mut bad = 0;
            for (name, x) in &doc.complexes {
                let r = validate_complex(x);
                bad += usize::from(!r.is_valid());
                print!("complex {name}: {r}");
            }
            for (name, e) in &doc.maps {
                let r = validate_map_with(&e.map, bounds.homotopy());
                bad += usize::from(!r.is_valid());
                print!("map {name}: {r}");
            }
            if bad > 0 {
                bail!("{bad} invalid item(s)");
            }
        }
        Command::CheckCover { input, map } => {
            let doc = load(&input)?;
            let c = cover(&doc, &map.map)?;
            let (v, a, f) = c.target().counts();
            println!("covering of degree {}", c.degree());
            println!("base: {v} vertices, {a} arcs, {f} faces");
        }
        Command::Degree { input, map } => {
            let doc = load(&input)?;
            println!("{}", cover(&doc, &map.map)?.degree());
        }
        Command::LiftPath { input, map, base, darts } => {
            let doc = load(&input)?;
            let c = cover(&doc, &map.map)?;
            let u = vertex(c.source(), Some(&base))?;
            let words: Vec<&str> = darts.iter().map(String::as_str).collect();
            let start = c.map().vertex(u);
            let p = c
                .target()
                .graph()
                .parse_path(start, &words)
                .ok_or_else(|| anyhow!("not a path from the image of `{base}`"))?;
            let lift = c.lift_path(&p, u)?;
            let g = c.source().graph();
            println!("{}", g.path_name(&lift));
            println!("ends at {}", g.vertex_name(lift.end(g)));
        }
        Command::LiftMap { input, map, along, from, base, out } => {
            let doc = load(&input)?;
            let c = cover(&doc, &map.map)?;
            let g = get_map(&doc, &along)?;
            let x = vertex(&g.source, Some(&from))?;
            let u = vertex(c.source(), Some(&base))?;
            let lift = c.lift_map(g, x, u)?;
            let mut d = CxDocument::new();
            let src = doc.maps[&along].source.clone();
            d.add_map("lift", &src, &doc.maps[&map.map].source, lift);
            emit(&out, &write_cx(&d))?;
        }
        Command::Pushout { input, map, shared, out } => {
            let doc = load(&input)?;
            let (f1, f2) = two_maps(&doc, &map)?;
            let mode = if shared { PushoutMode::Shared } else { PushoutMode::Disjoint };
            let po = pushout(f1, f2, mode)?;
            let mut d = CxDocument::new();
            d.add_complex("pushout", po.complex.clone());
            d.add_map("t1", &doc.maps[&map[0]].target, "pushout", po.t1);
            d.add_map("t2", &doc.maps[&map[1]].target, "pushout", po.t2);
            emit(&out, &write_cx(&d))?;
        }
        Command::Pullback { input, map, out } => {
            let doc = load(&input)?;
            let (f1, f2) = two_maps(&doc, &map)?;
            let pb = pullback(f1, f2)?;
            let mut d = CxDocument::new();
            d.add_complex("pullback", pb.complex.clone());
            d.add_map("t1", "pullback", &doc.maps[&map[0]].source, pb.t1);
            d.add_map("t2", "pullback", &doc.maps[&map[1]].source, pb.t2);
            emit(&out, &write_cx(&d))?;
        }
        Command::Higman { input, edge, pairs, out } => {
            let doc = load(&input)?;
            let mut names: Vec<&str> = Vec::new();
            let mut hp = Vec::new();
            for p in &pairs {
                let [m, a, b] = p.split(':').collect::<Vec<_>>()[..] else {
                    bail!("expected `MAP:DART:DART`, got `{p}`");
                };
                let f = get_map(&doc, m)?;
                let source = names.iter().position(|n| *n == m).unwrap_or_else(|| {
                    names.push(m);
                    names.len() - 1
                });
                let g = f.source.graph();
                let dart = |n: &str| g.dart_by_name(n).ok_or_else(|| anyhow!("no dart `{n}` in the source of `{m}`"));
                hp.push(HandlePair { source, first: dart(a)?, second: dart(b)? });
            }
            let maps: Vec<ComplexMap> = names.iter().map(|n| get_map(&doc, n).cloned()).collect::<Result<_>>()?;
            let e = maps[0].target.graph().dart_by_name(&edge).ok_or_else(|| anyhow!("no base dart `{edge}`"))?;
            let h = higman_composition(&maps, &HandleConfiguration { edge: e, pairs: hp })?;
            let mut d = CxDocument::new();
            d.add_map("higman", "composite", &doc.maps[names[0]].target, h.map);
            emit(&out, &write_cx(&d))?;
        }
        Command::QuotientGroup { input, map, out } => {
            let doc = load(&input)?;
            let gens = map.iter().map(|n| get_map(&doc, n).cloned()).collect::<Result<Vec<_>>>()?;
            let x = gens[0].source.clone();
            let action = GroupAction::new(x, gens)?;
            let (_, q) = quotient_by_group_action(&action)?;
            let mut d = CxDocument::new();
            d.add_map("quotient", &doc.maps[&map[0]].source, "orbits", q);
            emit(&out, &write_cx(&d))?;
        }
        Command::QuotientSub { input, complex, parts, out } => {
            let doc = load(&input)?;
            let x = get_complex(&doc, &complex)?;
            let parts = parts
                .iter()
                .map(|p| Subcomplex::from_names(x, &p.split(',').collect::<Vec<_>>()))
                .collect::<Result<Vec<_>, _>>()?;
            let (_, mut q) = quotient_by_subcomplexes(x, &parts)?;
            q.source = x.clone();
            let mut d = CxDocument::new();
            d.add_map("quotient", &complex, "collapsed", q);
            emit(&out, &write_cx(&d))?;
        }
        Command::Excise { input, map, cells, bounds, out } => {
            let doc = load(&input)?;
            let c = cover(&doc, &map.map)?;
            let z = Subcomplex::from_names(c.target(), &cells.split(',').collect::<Vec<_>>())?;
            let ex = excise(&c, &z, bounds.homotopy())?;
            eprintln!("degree {} -> {}", c.degree(), ex.cover.degree());
            let mut d = CxDocument::new();
            d.add_map("excised", "cover", "base", ex.cover.map().clone());
            emit(&out, &write_cx(&d))?;
        }
        Command::Monodromy { input, map, base } => {
            let doc = load(&input)?;
            let c = cover(&doc, &map.map)?;
            let v = vertex(c.target(), base.as_deref())?;
            let m = monodromy(&c, v)?;
            let yg = c.source().graph();
            let fiber: Vec<&str> = m.fiber.iter().map(|&u| yg.vertex_name(u)).collect();
            println!("fiber: {}", fiber.join(" "));
            println!("presentation: {}", m.presentation.presentation);
            for (name, p) in m.presentation.presentation.generators.iter().zip(&m.perms) {
                println!("{name}: {p}");
            }
        }
        Command::Enumerate { input, pres } => {
            let doc = load(&input)?;
            let (cp, table) = presentation(&doc, &pres)?;
            println!("presentation: {}", cp.presentation);
            match table.status {
                TableStatus::Closed => {
                    println!("index {}", table.len());
                    for (g, name) in cp.presentation.generators.iter().enumerate() {
                        println!("{name}: {}", table.permutation(g).expect("closed tables are complete"));
                    }
                }
                TableStatus::Exhausted { bound } => bail!("enumeration exhausted the bound of {bound} cosets"),
            }
        }
        Command::BottomUp { input, pres, out } => {
            let doc = load(&input)?;
            let (cp, table) = presentation(&doc, &pres)?;
            let c = bottom_up_cover(&cp, &table)?;
            eprintln!("degree {}", c.degree());
            let mut d = CxDocument::new();
            d.add_map("cover", "cover", &pres.complex, c.map().clone());
            emit(&out, &write_cx(&d))?;
        }
        Command::Universal { input, complex, base, max_cosets, radius, out } => {
            let doc = load(&input)?;
            let x = get_complex(&doc, &complex)?;
            let v = vertex(x, base.as_deref())?;
            let mut d = CxDocument::new();
            match universal_cover(x, v, UniversalBounds { max_cosets, radius })? {
                UniversalCover::Cover(c) => {
                    eprintln!("finite universal cover of degree {}", c.degree());
                    d.add_map("universal", "universal", &complex, c.map().clone());
                }
                UniversalCover::Truncated(t) => {
                    let (nv, na, nf) = t.complex().counts();
                    eprintln!("exhausted: ball of radius {radius} with {nv} vertices, {na} arcs, {nf} faces");
                    d.add_map("ball", "ball", &complex, t.map);
                }
            }
            emit(&out, &write_cx(&d))?;
        }
        Command::Galois { input, map, base } => {
            let doc = load(&input)?;
            let c = cover(&doc, &map.map)?;
            let v = vertex(c.target(), base.as_deref())?;
            let g = galois_group(&c, v)?;
            println!("order {}", g.order());
            println!("degree {}", c.degree());
            for p in g.perm_rep().elements() {
                println!("{p}");
            }
        }
        Command::IsGalois { input, map } => {
            let doc = load(&input)?;
            let v = is_galois(&cover(&doc, &map.map)?)?;
            if v.galois {
                println!("galois: group of order {} equals the degree", v.order);
            } else {
                println!("not galois: group of order {} below degree {}", v.order, v.degree);
                if let Some(w) = v.witness {
                    println!("witness: {w}");
                }
            }
        }
        Command::Lattice { input, map, dot } => {
            let doc = load(&input)?;
            let l = intermediate_lattice(&cover(&doc, &map.map)?)?;
            if dot {
                print!("{}", io::correspondence_to_dot(&map.map, &l));
            } else {
                println!("{} classes", l.len());
                for (i, z) in l.covers.iter().enumerate() {
                    let h = &l.subgroups.subgroups[l.phi[i]];
                    let normal = covers::permgroup::is_normal(h, &l.subgroups.group);
                    println!("Z{i}: degree {}, subgroup order {}, normal {normal}", z.degree(), h.order());
                }
                for (i, j) in covers::permgroup::hasse_edges(&l.cover_leq) {
                    println!("Z{i} < Z{j}");
                }
            }
        }
        Command::InverseGalois { degree, gens, out } => {
            let perms = gens.iter().map(|s| parse_perm(degree, s)).collect::<Result<Vec<_>>>()?;
            let (c, g) = inverse_galois(&perms)?;
            eprintln!("group of order {}", g.order());
            let mut d = CxDocument::new();
            d.add_map("cover", "cover", "bouquet", c.map().clone());
            emit(&out, &write_cx(&d))?;
        }
        Command::Dot { input, complex, map, lattice, out } => {
            let doc = load(&input)?;
            let text = match (complex, map, lattice) {
                (Some(n), None, None) => io::complex_to_dot(&n, get_complex(&doc, &n)?),
                (None, Some(n), None) => io::map_to_dot(&n, get_map(&doc, &n)?),
                (None, None, Some(n)) => io::correspondence_to_dot(&n, &intermediate_lattice(&cover(&doc, &n)?)?),
                _ => bail!("give exactly one of --complex, --map, --lattice"),
            };
            emit(&out, &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
