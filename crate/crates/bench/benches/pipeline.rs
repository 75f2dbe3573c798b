use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pseudoherm::kleingordon::make_grid;
use pseudoherm::models::{self, EnsembleKind, EnsembleSpec};
use pseudoherm::suite::{kg_pipeline, sector_contrast};
use pseudoherm::{build_positive_metric, classify, eig_full, hermitize};

fn eigensystem(c: &mut Criterion) {
    let mut g = c.benchmark_group("eig_full");
    for dim in [4, 8, 32] {
        let h = models::generate(&EnsembleSpec::new(EnsembleKind::Quasi, dim, 1)).h;
        g.bench_with_input(BenchmarkId::from_parameter(dim), &h, |b, h| {
            b.iter(|| eig_full(black_box(h)))
        });
    }
    g.finish();
}

fn metric_and_hermitize(c: &mut Criterion) {
    let h = models::generate(&EnsembleSpec::new(EnsembleKind::Quasi, 8, 2)).h;
    let s = eig_full(&h).unwrap();
    c.bench_function("classify_8", |b| b.iter(|| classify(black_box(&h), 1e-9)));
    c.bench_function("positive_metric_8", |b| b.iter(|| build_positive_metric(black_box(&s))));
    let eta = build_positive_metric(&s).unwrap();
    c.bench_function("hermitize_8", |b| b.iter(|| hermitize(black_box(&h), black_box(&eta))));
}

fn klein_gordon(c: &mut Criterion) {
    let mut g = c.benchmark_group("klein_gordon");
    g.sample_size(10);
    let grid = make_grid(64, 20.0 * PI, 1.0).unwrap();
    g.bench_function("pipeline_64x10", |b| b.iter(|| kg_pipeline(&grid, 1.0, 10.0, 10, 3)));
    g.bench_function("sector_contrast_64", |b| b.iter(|| sector_contrast(black_box(&grid))));
    g.finish();
}

criterion_group!(benches, eigensystem, metric_and_hermitize, klein_gordon);
criterion_main!(benches);
