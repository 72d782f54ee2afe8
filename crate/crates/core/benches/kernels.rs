//! Kernel timings on one worker thread against the full pool.
//!
//! Build with `--no-default-features` to time the sequential code path
//! instead; both variants then run identical code.

use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracshape::harness::{run_sweep, SolverOptions};
use fracshape::nonlocal::{fractional_perimeter_grid, fractional_perimeter_mc, radial_curvature_all, radial_perimeter};
use fracshape::parallel::{current_threads, with_threads};
use fracshape::{GridSet, Potential, QuadratureSpec, RadialShape, Shape};

fn thread_counts() -> Vec<usize> {
    let all = current_threads();
    if all > 1 {
        vec![1, all]
    } else {
        vec![1]
    }
}

fn kernels(c: &mut Criterion) {
    let s = 0.5;
    let q = QuadratureSpec::with_s(s);
    let ellipse = RadialShape::ellipse([0.0, 0.0], 1.3, 0.8, 256).unwrap();
    let grid = GridSet::from_fn(2, [-1.0, -1.0], 1.0 / 48.0, 96, 96, |p| p[0] * p[0] + p[1] * p[1] < 0.9).unwrap();
    let mc_shape = Shape::Radial(ellipse.clone());
    let mc_q = QuadratureSpec { mc_samples: 100_000, ..q };

    let mut group = c.benchmark_group("kernels");
    group.sample_size(10);
    for threads in thread_counts() {
        group.bench_with_input(BenchmarkId::new("radial_perimeter", threads), &threads, |b, &t| {
            b.iter(|| with_threads(t, || radial_perimeter(black_box(&ellipse), s)))
        });
        group.bench_with_input(BenchmarkId::new("radial_curvature", threads), &threads, |b, &t| {
            b.iter(|| with_threads(t, || radial_curvature_all(black_box(&ellipse), s)))
        });
        group.bench_with_input(BenchmarkId::new("grid_perimeter", threads), &threads, |b, &t| {
            b.iter(|| with_threads(t, || fractional_perimeter_grid(black_box(&grid), &q).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("monte_carlo", threads), &threads, |b, &t| {
            b.iter(|| with_threads(t, || fractional_perimeter_mc(black_box(&mc_shape), &mc_q, 1).unwrap()))
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let g = Potential::power(2.0);
    let opts = SolverOptions { k: 64, starts: 1, ..SolverOptions::default() };
    let vols: Vec<f64> = [0.3, 0.1, 0.03, 0.01, 0.003].iter().map(|f| f * PI).collect();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for threads in thread_counts() {
        group.bench_with_input(BenchmarkId::new("five_volumes", threads), &threads, |b, &t| {
            b.iter(|| with_threads(t, || run_sweep(0.5, &g, black_box(&vols), &opts).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, kernels, sweep);
criterion_main!(benches);
