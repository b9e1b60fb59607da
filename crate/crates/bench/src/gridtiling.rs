use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use twosphere::gridtiling::{generate_reduction, solve_grid_tiling};
use twosphere::GridTilingInstance;

use crate::rng;

pub fn benchmarks(c: &mut Criterion) {
    let mut group = c.benchmark_group("gridtiling");
    for k in [1u32, 2, 3] {
        let instance = GridTilingInstance::random_yes(4, k, 0.5, &mut rng(u64::from(k)));
        group.bench_with_input(BenchmarkId::new("generate", k), &instance, |b, i| {
            b.iter(|| generate_reduction(black_box(i)))
        });
        group.bench_with_input(BenchmarkId::new("solve", k), &instance, |b, i| {
            b.iter(|| solve_grid_tiling(black_box(i)))
        });
    }
    group.finish();
}
