use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use twosphere::random::planted_tetrahedron;
use twosphere::search::{barycentric_subdivision, enumerate_sphere_triangulations};
use twosphere::{find_sphere_subcomplex, ColorCodingParams, Engine, SearchMode};

use crate::{glued, rng};

pub fn benchmarks(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(20);
    for size in [16, 32, 64] {
        let host = glued(size as u64, size);
        group.bench_with_input(BenchmarkId::new("backtracking", size), &host, |b, host| {
            b.iter(|| find_sphere_subcomplex(black_box(host), 8, SearchMode::AtMost, &Engine::Backtracking))
        });
    }
    let planted = planted_tetrahedron(&mut rng(5), 9, 12);
    let params = ColorCodingParams {
        seed: 5,
        delta: 0.1,
        max_trials: None,
    };
    group.bench_function("color-coding/planted", |b| {
        b.iter(|| {
            find_sphere_subcomplex(
                black_box(&planted),
                4,
                SearchMode::Exactly,
                &Engine::ColorCoding(params),
            )
        })
    });
    group.bench_function("enumerate/10", |b| {
        b.iter(|| enumerate_sphere_triangulations(black_box(10)))
    });
    let sphere = glued(1, 200);
    group.bench_function("subdivide/200", |b| {
        b.iter(|| barycentric_subdivision(black_box(&sphere)))
    });
    group.finish();
}
