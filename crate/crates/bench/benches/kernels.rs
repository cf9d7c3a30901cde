use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gruss_core::gruss::{choi_counterexample, sweep, CheckConfig, Family};
use gruss_core::linalg::{random_gaussian, singular_values};
use gruss_core::orbit::{orbit_diameter, DiameterOptions, MethodChoice};
use gruss_core::SplitMix64;
use std::hint::black_box;

fn svd(c: &mut Criterion) {
    let mut group = c.benchmark_group("singular_values");
    for n in [4usize, 16, 48] {
        let a = random_gaussian(n, n, &mut SplitMix64::new(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| singular_values(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn diameter(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbit_diameter");
    let descent = DiameterOptions::with_method(MethodChoice::Descent);
    for n in [2usize, 4] {
        let a = random_gaussian(n, n, &mut SplitMix64::new(100 + n as u64));
        group.bench_with_input(BenchmarkId::new("descent", n), &a, |b, a| {
            b.iter(|| orbit_diameter(black_box(a), &descent).unwrap())
        });
    }
    group.finish();
}

fn checks(c: &mut Criterion) {
    c.bench_function("counterexample", |b| b.iter(|| choi_counterexample().unwrap()));
    let config = CheckConfig {
        families: vec![Family::Norm],
        trials: 20,
        ..CheckConfig::default()
    };
    c.bench_function("sweep_norm_20", |b| b.iter(|| sweep(black_box(&config), 1).unwrap()));
}

criterion_group!(benches, svd, diameter, checks);
criterion_main!(benches);
