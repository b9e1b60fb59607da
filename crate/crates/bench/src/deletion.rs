use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use twosphere::deletion::{compress, kernelize, solve_branching, solve_conflict_param};
use twosphere::DeletionInstance;

use crate::glued;

pub fn benchmarks(c: &mut Criterion) {
    let mut group = c.benchmark_group("deletion");
    group.sample_size(20);
    for size in [50, 200, 800] {
        let instance = DeletionInstance::new(glued(size as u64, size), 6);
        group.bench_with_input(BenchmarkId::new("branching", size), &instance, |b, i| {
            b.iter(|| solve_branching(black_box(i)))
        });
        group.bench_with_input(BenchmarkId::new("conflict", size), &instance, |b, i| {
            b.iter(|| solve_conflict_param(black_box(i)))
        });
        group.bench_with_input(BenchmarkId::new("kernelize", size), &instance, |b, i| {
            b.iter(|| kernelize(black_box(i)))
        });
        group.bench_with_input(BenchmarkId::new("compress", size), &instance, |b, i| {
            b.iter(|| compress(black_box(i)))
        });
    }
    group.finish();
}
