use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use permsearch::batch::{
    grid_problem, solve_batch, solve_batch_sequential, wreath_problem, GridVariant,
};
use permsearch::{GeneratedGroup, Problem, RefinerMode, SearchOptions};

fn grid_batch(m: usize, mode: RefinerMode) -> Vec<Problem> {
    (0..16)
        .map(|seed| grid_problem(m, GridVariant::Random, seed, mode))
        .collect()
}

fn grid(c: &mut Criterion) {
    let opts = SearchOptions::default();
    let mut group = c.benchmark_group("grid");
    group.sample_size(10);
    for (m, mode) in [(8, RefinerMode::Fixed), (10, RefinerMode::PreOrbital)] {
        let problems = grid_batch(m, mode);
        let label = format!("m{m}-{mode}");
        group.bench_with_input(BenchmarkId::new("parallel", &label), &problems, |b, p| {
            b.iter(|| black_box(solve_batch(p, &opts)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", &label), &problems, |b, p| {
            b.iter(|| black_box(solve_batch_sequential(p, &opts)))
        });
    }
    group.finish();
}

fn wreath(c: &mut Criterion) {
    let opts = SearchOptions::default();
    let base = GeneratedGroup::wreath_product(4, 3);
    let problems: Vec<Problem> = (0..8)
        .map(|seed| wreath_problem(&base, 3, 4, seed, RefinerMode::PreOrbital).unwrap())
        .collect();
    let mut group = c.benchmark_group("wreath");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| black_box(solve_batch(&problems, &opts))));
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(solve_batch_sequential(&problems, &opts)))
    });
    group.finish();
}

criterion_group!(benches, grid, wreath);
criterion_main!(benches);
