use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use anchorsum_core::moments::{total_moment_exact_value, total_moment_float};
use anchorsum_core::simulation::estimate;
use anchorsum_core::special::incomplete_beta_float;
use anchorsum_core::{MomentQuery, SimulationConfig};

fn exact(c: &mut Criterion) {
    let q = MomentQuery::new(50, 3).unwrap();
    c.bench_function("exact n=50 a=3", |b| {
        b.iter(|| total_moment_exact_value(black_box(&q)).unwrap())
    });
}

fn float(c: &mut Criterion) {
    let q = MomentQuery::new(10_000, 3).unwrap();
    c.bench_function("float n=1e4 a=3", |b| {
        b.iter(|| total_moment_float(black_box(&q)).unwrap())
    });
}

fn incomplete_beta(c: &mut Criterion) {
    c.bench_function("incomplete beta c=500 d=501", |b| {
        b.iter(|| incomplete_beta_float(black_box(0.4995), 500.0, 501.0).unwrap())
    });
}

fn monte_carlo(c: &mut Criterion) {
    let config = SimulationConfig::new(20, 2, 10_000, 1, 1).unwrap();
    let mut group = c.benchmark_group("simulation");
    group.sample_size(10);
    group.bench_function("estimate n=20 trials=1e4", |b| {
        b.iter(|| estimate(black_box(&config)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, exact, float, incomplete_beta, monte_carlo);
criterion_main!(benches);
