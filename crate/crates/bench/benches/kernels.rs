use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracseries::*;

fn special(c: &mut Criterion) {
    c.bench_function("log_gamma_ratio", |b| b.iter(|| log_gamma_ratio(black_box(1234.5), black_box(1200.25))));
    c.bench_function("mittag_leffler_half_z20", |b| b.iter(|| mittag_leffler(0.5, black_box(20.0), 1e-15)));
}

fn series(c: &mut Criterion) {
    let mut g = c.benchmark_group("cauchy_product");
    for n in [100usize, 1000] {
        let a = make_series(0.5, &vec![0.5; n]).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| a.cauchy_product(a)));
    }
    g.finish();
}

fn bell(c: &mut Criterion) {
    let z: Vec<f64> = (1..=60).map(|i| 1.0 / i as f64).collect();
    c.bench_function("bell_recursive_60_20", |b| b.iter(|| bell_recursive(60, 20, black_box(&z))));
}

fn solver(c: &mut Criterion) {
    let p = vec![make_series(0.5, &[1.0, 1.0]).unwrap()];
    let prob = CauchyProblem::new(0.5, p, vec![1.0]).unwrap().with_all_polynomial();
    let mut g = c.benchmark_group("solve_cauchy");
    for n in [200usize, 2000] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| solve_cauchy(&prob, n)));
    }
    g.finish();
}

fn growth(c: &mut Criterion) {
    let grid = geometric_grid(10.0, 1e5, 40).unwrap();
    let f = MittagLefflerSeries::new(0.5, 1.0).unwrap();
    c.bench_function("order_estimate_closed_form", |b| b.iter(|| order_estimate(&f, black_box(&grid))));
    let stored = mittag_leffler_coeffs(1.0, 1.0, 5000).unwrap();
    let grid = geometric_grid(10.0, 3000.0, 40).unwrap();
    c.bench_function("wv_samples_stored_5000", |b| b.iter(|| wv_samples(&stored, black_box(&grid))));
}

criterion_group!(benches, special, series, bell, solver, growth);
criterion_main!(benches);
