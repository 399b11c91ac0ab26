use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pa_fbl::benchmarks::{genie_throughput, no_csit_rate_opt};
use pa_fbl::montecarlo::{mc_average_throughput, McConfig};
use pa_fbl::rate_adapt::{average_throughput, rate_opt_given_ghat, PaOperatingPoint, RatePolicy};
use pa_fbl::specfun::{bessel_i0_scaled, gaussian_q, lambert_w0, marcum_q1};
use pa_fbl_bench::{budget, grid, BLOCK_LENGTH, OPERATING_POINTS};

fn specfun(c: &mut Criterion) {
    let mut g = c.benchmark_group("specfun");
    let xs = grid(0.0, 40.0, 256);
    g.bench_function("marcum_q1", |b| {
        b.iter(|| {
            xs.iter()
                .map(|&x| marcum_q1(black_box(0.1 * x), x).unwrap())
                .sum::<f64>()
        })
    });
    g.bench_function("bessel_i0_scaled", |b| {
        b.iter(|| xs.iter().map(|&x| bessel_i0_scaled(black_box(x)).unwrap()).sum::<f64>())
    });
    g.bench_function("gaussian_q", |b| {
        b.iter(|| xs.iter().map(|&x| gaussian_q(black_box(x - 20.0))).sum::<f64>())
    });
    g.bench_function("lambert_w0", |b| {
        b.iter(|| xs.iter().map(|&x| lambert_w0(black_box(x * x)).unwrap()).sum::<f64>())
    });
    g.finish();
}

fn rate_adaptation(c: &mut Criterion) {
    let mut g = c.benchmark_group("rate_adaptation");
    for (sigma, db) in OPERATING_POINTS {
        let pt = PaOperatingPoint::new(1.0, sigma, budget(db), BLOCK_LENGTH).unwrap();
        g.bench_with_input(
            BenchmarkId::new("rate_opt_given_ghat", format!("{sigma}/{db}dB")),
            &pt,
            |b, pt| b.iter(|| rate_opt_given_ghat(black_box(pt)).unwrap()),
        );
    }
    g.finish();
}

fn averages(c: &mut Criterion) {
    let mut g = c.benchmark_group("averages");
    g.sample_size(10);
    let (sigma, db) = OPERATING_POINTS[1];
    let b_ = budget(db);
    for (name, policy) in [
        ("theorem1", RatePolicy::Theorem1),
        ("theorem2", RatePolicy::Theorem2ClosedForm),
        ("numeric", RatePolicy::NumericRefined),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| average_throughput(black_box(sigma), &b_, BLOCK_LENGTH, policy).unwrap())
        });
    }
    g.bench_function("no_csit_rate_opt", |b| {
        b.iter(|| no_csit_rate_opt(black_box(&b_), BLOCK_LENGTH).unwrap())
    });
    g.bench_function("genie", |b| {
        b.iter(|| genie_throughput(black_box(&b_), BLOCK_LENGTH).unwrap())
    });
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    let (sigma, db) = OPERATING_POINTS[1];
    let b_ = budget(db);
    let cfg = McConfig::new(10_000, 1, 1024).unwrap();
    g.bench_function("adaptive_10k", |b| {
        b.iter(|| mc_average_throughput(black_box(sigma), &b_, BLOCK_LENGTH, RatePolicy::NumericRefined, &cfg).unwrap())
    });
    g.bench_function("fixed_rate_10k", |b| {
        b.iter(|| mc_average_throughput(black_box(sigma), &b_, BLOCK_LENGTH, RatePolicy::Fixed(2.0), &cfg).unwrap())
    });
    g.finish();
}

criterion_group!(benches, specfun, rate_adaptation, averages, monte_carlo);
criterion_main!(benches);
