//! Benchmarks for the hot kernels: group enumeration, conjugacy-class
//! decomposition, the class-multiplication tensor, and character tables.

use criterion::{criterion_group, criterion_main, Criterion};
use std::sync::Arc;

use classprod::chartab::dixon_table;
use classprod::classalg::structure_constants;
use classprod::classes::conjugacy_classes;
use classprod::groups::{build_group, GroupSpec};

fn bench_enumerate(c: &mut Criterion) {
    let spec: GroupSpec = "sl:2:9".parse().unwrap();
    c.bench_function("enumerate sl:2:9", |b| {
        b.iter(|| build_group(&spec, 1_000_000).unwrap())
    });
}

fn bench_classes(c: &mut Criterion) {
    let g = build_group(&"sl:2:9".parse().unwrap(), 1_000_000).unwrap();
    c.bench_function("classes sl:2:9", |b| b.iter(|| conjugacy_classes(Arc::clone(&g))));
}

fn bench_tensor(c: &mut Criterion) {
    let g = build_group(&"alt:5".parse().unwrap(), 1_000_000).unwrap();
    let d = conjugacy_classes(Arc::clone(&g));
    c.bench_function("tensor alt:5", |b| b.iter(|| structure_constants(&g, &d).unwrap()));
}

fn bench_chartab(c: &mut Criterion) {
    let g = build_group(&"sl:2:5".parse().unwrap(), 1_000_000).unwrap();
    let d = conjugacy_classes(Arc::clone(&g));
    let sc = structure_constants(&g, &d).unwrap();
    c.bench_function("character table sl:2:5", |b| {
        b.iter(|| dixon_table(&g, &d, &sc).unwrap())
    });
}

criterion_group!(benches, bench_enumerate, bench_classes, bench_tensor, bench_chartab);
criterion_main!(benches);
