use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diskweyl_core::bessel_zeros::{initial_guess, refine_zero};
use diskweyl_core::lattice_count::{count_lattice, mollified_count};
use diskweyl_core::special_fn::bessel_j;
use diskweyl_core::spectral_count::count_disk;
use diskweyl_core::{MollifyConfig, Side};

fn bessel(c: &mut Criterion) {
    let mut g = c.benchmark_group("bessel_j");
    for (n, x) in [(0u32, 10.0), (50, 60.0), (500, 700.0)] {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("n{n}_x{x}")),
            &(n, x),
            |b, &(n, x)| b.iter(|| bessel_j(black_box(n), black_box(x))),
        );
    }
    g.finish();
}

fn zeros(c: &mut Criterion) {
    let mut g = c.benchmark_group("refine_zero");
    for (n, k) in [(0u32, 1u32), (100, 1), (100, 40), (1000, 5)] {
        let guess = initial_guess(n, k).unwrap();
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("n{n}_k{k}")),
            &(n, guess),
            |b, &(n, guess)| b.iter(|| refine_zero(black_box(n), black_box(guess))),
        );
    }
    g.finish();
}

fn counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("counts");
    g.sample_size(10);
    for mu in [50.0, 200.0] {
        g.bench_with_input(BenchmarkId::new("count_disk", mu), &mu, |b, &mu| {
            b.iter(|| count_disk(black_box(mu)))
        });
    }
    for mu in [200.0, 1500.0] {
        g.bench_with_input(BenchmarkId::new("count_lattice", mu), &mu, |b, &mu| {
            b.iter(|| count_lattice(black_box(mu)))
        });
    }
    let cfg = MollifyConfig::default();
    g.bench_function("mollified_count/20", |b| {
        b.iter(|| mollified_count(Side::Plus, black_box(20.0), &cfg))
    });
    g.finish();
}

criterion_group!(benches, bessel, zeros, counts);
criterion_main!(benches);
