use std::hint::black_box;
use std::sync::Arc;

use covers::constructions::pullback;
use covers::corpus;
use covers::covering::{check_covering, coset_enumerate, universal_cover, ComplexPresentation, UniversalBounds};
use covers::galois::{galois_group, intermediate_lattice, inverse_galois};
use covers::graph::VertexId;
use covers::permgroup::Permutation;
use criterion::{criterion_group, criterion_main, Criterion};

fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
    Permutation::from_cycles(n, cycles).unwrap()
}

fn coverings(c: &mut Criterion) {
    let m = corpus::cyc_cover(64);
    c.bench_function("check_covering cyc64", |b| b.iter(|| check_covering(black_box(&m)).unwrap()));
    let (f, g) = corpus::pullback_figure();
    c.bench_function("pullback hexagon", |b| b.iter(|| pullback(black_box(&f), black_box(&g)).unwrap()));
}

fn enumeration(c: &mut Criterion) {
    let x = Arc::new(corpus::cyclic_presentation(60));
    let cp = ComplexPresentation::new(x, VertexId(0)).unwrap();
    c.bench_function("coset_enumerate Z60", |b| {
        b.iter(|| coset_enumerate(black_box(&cp.presentation), &[], 10_000).unwrap())
    });
    let torus = Arc::new(corpus::torus());
    c.bench_function("universal torus radius 4", |b| {
        b.iter(|| universal_cover(&torus, VertexId(0), UniversalBounds { max_cosets: 2000, radius: 4 }).unwrap())
    });
}

fn galois(c: &mut Criterion) {
    let a4 = [perm(4, &[&[0, 1, 2]]), perm(4, &[&[0, 1], &[2, 3]])];
    let (cert, _) = inverse_galois(&a4).unwrap();
    c.bench_function("galois_group A4", |b| b.iter(|| galois_group(black_box(&cert), VertexId(0)).unwrap()));
    let s3 = [perm(3, &[&[0, 1]]), perm(3, &[&[0, 1, 2]])];
    let (cert, _) = inverse_galois(&s3).unwrap();
    c.bench_function("intermediate_lattice S3", |b| b.iter(|| intermediate_lattice(black_box(&cert)).unwrap()));
}

criterion_group!(benches, coverings, enumeration, galois);
criterion_main!(benches);
