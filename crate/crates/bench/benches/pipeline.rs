//! End-to-end benchmarks: spectrum computation, series construction,
//! distribution evaluation, path sampling, and Monte Carlo tail estimation.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use tamsdld_bench::bench_spectrum;
use tamsdld_core::{
    build_series, mc_tail, sample_path, tamsd, tamsd_cdf, tamsd_pdf, LagSpec, PathSampler,
    ProcessModel, TailStatistic,
};

fn spectrum_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    for (h, n, tau) in [(0.5, 256, 2), (0.7, 256, 2), (0.3, 1024, 8)] {
        group.bench_function(format!("H{h}_N{n}_tau{tau}"), |b| {
            b.iter(|| bench_spectrum(black_box(h), black_box(n), black_box(tau)))
        });
    }
    group.finish();
}

fn series_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_build");
    // Configurations inside the series-practical envelope (the lag-2/lag-5
    // covariances turn near-singular at large N, where the builder refuses).
    for (h, n, tau) in [(0.7, 257, 1), (0.3, 16, 2), (0.7, 16, 5)] {
        let sp = bench_spectrum(h, n, tau);
        group.bench_function(format!("H{h}_N{n}_tau{tau}"), |b| {
            b.iter(|| build_series(black_box(&sp), 1e-12).unwrap())
        });
    }
    group.finish();
}

fn eval_bench(c: &mut Criterion) {
    let sp = bench_spectrum(0.7, 257, 1);
    let series = build_series(&sp, 1e-12).unwrap();
    let x = series.mean();
    c.bench_function("pdf_eval", |b| {
        b.iter(|| tamsd_pdf(black_box(&series), black_box(x)).unwrap())
    });
    c.bench_function("cdf_eval", |b| {
        b.iter(|| tamsd_cdf(black_box(&series), black_box(x)).unwrap())
    });
}

fn sampler_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_path");
    for (h, n) in [(0.5, 1024), (0.7, 1024), (0.3, 4096)] {
        let model = if h == 0.5 {
            ProcessModel::bm(0.5).unwrap()
        } else {
            ProcessModel::fbm(0.5, h).unwrap()
        };
        let sampler = PathSampler::new(&model, n).unwrap();
        group.bench_function(format!("H{h}_n{n}"), |b| {
            let mut trial = 0u64;
            b.iter_batched(
                || {
                    trial += 1;
                    trial
                },
                |t| sampler.sample_path(black_box(7), black_box(t)),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn tamsd_bench(c: &mut Criterion) {
    let model = ProcessModel::fbm(0.5, 0.7).unwrap();
    let traj = sample_path(&model, 4096, 11, 0).unwrap();
    c.bench_function("tamsd_N4096_tau8", |b| {
        b.iter(|| tamsd(black_box(&traj), black_box(8)).unwrap())
    });
}

fn mc_bench(c: &mut Criterion) {
    let model = ProcessModel::fbm(0.5, 0.7).unwrap();
    let lag = LagSpec::new(64, 2).unwrap();
    c.bench_function("mc_tail_10k_trials", |b| {
        b.iter(|| {
            mc_tail(
                black_box(&model),
                lag,
                0.5,
                TailStatistic::TamsdTwoSided,
                10_000,
                7,
                0,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    spectrum_bench,
    series_bench,
    eval_bench,
    sampler_bench,
    tamsd_bench,
    mc_bench
);
criterion_main!(benches);
