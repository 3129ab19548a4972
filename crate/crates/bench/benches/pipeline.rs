use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use solvrad_bench::{fixture, D5, QUINTIC};
use solvrad_core::pipeline::{prepare_group, LabelingMode};
use solvrad_core::resolvent::{build_theta0, forward_pass};
use solvrad_core::{find_roots, solve, SolveOptions};

fn roots(c: &mut Criterion) {
    let (p, _) = fixture(QUINTIC, D5);
    let mut group = c.benchmark_group("find_roots");
    for digits in [20u32, 40, 80] {
        group.bench_with_input(BenchmarkId::from_parameter(digits), &digits, |b, &d| {
            b.iter(|| find_roots(black_box(&p), d).unwrap())
        });
    }
    group.finish();
}

fn forward(c: &mut Criterion) {
    let (p, g) = fixture(QUINTIC, D5);
    let (_, series) = prepare_group(&g, 5).unwrap();
    let rs = find_roots(&p, 19).unwrap().permuted(&[4, 0, 2, 1, 3]);
    c.bench_function("forward_pass/quintic", |b| {
        b.iter(|| forward_pass(build_theta0(black_box(&rs), &series).unwrap()))
    });
}

fn end_to_end(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(20);
    let given = SolveOptions {
        labeling: LabelingMode::Given(vec![2, 4, 3, 5, 1]),
        ..Default::default()
    };
    let (p, g) = fixture(QUINTIC, D5);
    group.bench_function("quintic_given", |b| b.iter(|| solve(black_box(&p), &g, &given).unwrap()));
    group.bench_function("quintic_auto", |b| {
        b.iter(|| solve(black_box(&p), &g, &SolveOptions::default()).unwrap())
    });
    let (p, g) = fixture("x^3-2", "(1,2,3);(1,2)");
    group.bench_function("cubic", |b| b.iter(|| solve(black_box(&p), &g, &SolveOptions::default()).unwrap()));
    group.finish();
}

criterion_group!(benches, roots, forward, end_to_end);
criterion_main!(benches);
