//! Parallel against single-threaded throughput of the heavy kernels.
//!
//! Run with `--no-default-features` to time the sequential build instead.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use smoothsum::asymptotic::{exact_integral, main_term, TestFunction};
use smoothsum::euler::lemma1_check;
use smoothsum::oracle::brute_s;
use smoothsum::{par, Complex64, SumParams};

fn pools() -> [(&'static str, usize); 2] {
    // 0 means the default pool (all cores)
    [("1-thread", 1), ("default", 0)]
}

fn brute(c: &mut Criterion) {
    let f = TestFunction::gaussian(1.0, 0.4).unwrap();
    let p = SumParams::new(Complex64::new(0.5, 0.5), 3, 40).unwrap();
    let mut g = c.benchmark_group("brute_s N=40 k=3");
    for (name, threads) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_threads(threads, || brute_s(black_box(&p), &f, f64::INFINITY).unwrap()))
        });
    }
    g.finish();
}

fn integrals(c: &mut Criterion) {
    let f = TestFunction::gaussian(1.0, 0.4).unwrap();
    let p = SumParams::new(Complex64::new(0.5, 0.5), 3, 1000).unwrap();
    let mut g = c.benchmark_group("integrals N=1000");
    g.sample_size(10);
    for (name, threads) in pools() {
        g.bench_function(BenchmarkId::new("exact", name), |b| {
            b.iter(|| par::with_threads(threads, || exact_integral(black_box(&p), &f, 1e-10).unwrap()))
        });
        g.bench_function(BenchmarkId::new("main_term", name), |b| {
            b.iter(|| par::with_threads(threads, || main_term(black_box(&p), &f, 1e-10).unwrap()))
        });
    }
    g.finish();
}

fn products(c: &mut Criterion) {
    let taus: Vec<f64> = (0..=60).map(|i| -3.0 + 0.1 * i as f64).collect();
    let mut g = c.benchmark_group("correction product N=10^4");
    g.sample_size(10);
    for (name, threads) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_threads(threads, || lemma1_check(Complex64::new(1.0, 0.0), 2, &[10_000], black_box(&taus)).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, brute, integrals, products);
criterion_main!(benches);
