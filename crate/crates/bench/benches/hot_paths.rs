//! Benchmarks for the quadrature pipeline and the solver's inner loop.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use orlimink_core::body::HalfspacePolytope;
use orlimink_core::measure::{dual_orlicz_curvature_measure, DiscreteSphericalMeasure};
use orlimink_core::orlicz::{radial_addition, Monotonicity, OrliczPair, RadialAdditionSpec, ScalarFn};
use orlimink_core::quadrature::{GridRule, SphericalGrid};
use orlimink_core::solver::{rescale_to_constraint, solve_dual_orlicz_minkowski, SolverConfig};
use std::f64::consts::PI;
use std::sync::Arc;

fn bench_integrate(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrate_constant");
    for res in [10_000usize, 100_000] {
        let grid = SphericalGrid::build(3, GridRule::Fibonacci3d, res, None).unwrap();
        let values = vec![1.0; grid.len()];
        group.bench_with_input(BenchmarkId::from_parameter(res), &res, |b, _| {
            b.iter(|| grid.integrate(&values).unwrap())
        });
    }
    group.finish();
}

fn bench_curvature_measure(c: &mut Criterion) {
    let cube = HalfspacePolytope::axis_cube(3, 1.0).unwrap();
    let pair = OrliczPair::power(-1.0).unwrap();
    let mut group = c.benchmark_group("curvature_measure_cube");
    for res in [10_000usize, 100_000] {
        let grid = SphericalGrid::build(3, GridRule::Fibonacci3d, res, None).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(res), &res, |b, _| {
            b.iter(|| dual_orlicz_curvature_measure(&cube, &pair, &grid).unwrap())
        });
    }
    group.finish();
}

fn bench_radial_addition(c: &mut Criterion) {
    let sq: ScalarFn = Arc::new(|t: f64| t * t);
    let spec = RadialAdditionSpec::new(sq.clone(), sq, Monotonicity::Increasing, 0.5).unwrap();
    let rho_k: Vec<f64> = (0..4096).map(|i| 1.0 + 0.3 * ((i as f64) * 0.01).sin()).collect();
    let rho_l: Vec<f64> = (0..4096).map(|i| 0.8 + 0.2 * ((i as f64) * 0.02).cos()).collect();
    c.bench_function("radial_addition_4096", |b| {
        b.iter(|| radial_addition(&rho_k, &rho_l, &spec).unwrap())
    });
}

fn bench_rescale(c: &mut Criterion) {
    let cube = HalfspacePolytope::axis_cube(3, 1.0).unwrap();
    let pair = OrliczPair::power(-1.0).unwrap();
    let grid = SphericalGrid::build(3, GridRule::Fibonacci3d, 100_000, None).unwrap();
    c.bench_function("rescale_to_constraint_1e5", |b| {
        b.iter(|| rescale_to_constraint(&cube, &pair, &grid, 3.0).unwrap())
    });
}

fn bench_solve_2d(c: &mut Criterion) {
    let dirs: Vec<Vec<f64>> = (0..8)
        .map(|k| {
            let t = 0.1 + 2.0 * PI * k as f64 / 8.0;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let mu = DiscreteSphericalMeasure::from_parts(2, dirs, vec![1.0; 8]).unwrap();
    let pair = OrliczPair::power(-1.0).unwrap();
    let mut config = SolverConfig::default_for_dim(2);
    config.seed = Some(7);
    c.bench_function("solve_octagon_2d", |b| {
        b.iter(|| solve_dual_orlicz_minkowski(&mu, &pair, &config).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_integrate, bench_curvature_measure, bench_radial_addition, bench_rescale, bench_solve_2d
}
criterion_main!(benches);
