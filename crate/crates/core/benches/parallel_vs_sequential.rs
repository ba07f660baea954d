use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use smflow::final_state::{residual_samples, FinalStateProfile, Psi};
use smflow::metric::{scan_vanishing_points, CatalogMetric, MetricSpec, Rect, ScanOptions};
use smflow::par::Execution;
use smflow::spectral::{GridSpec, InitialData, Nonlinearity, Solver, SolverConfig};
use smflow::Complex64;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn solver_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("solver_step");
    let grid = GridSpec::new(512.0, 8192).unwrap();
    let z0 = InitialData::Gaussian { epsilon: 0.05, sigma0: 1.0 }.sample(grid, 0.0);
    for (name, exec) in MODES {
        let cfg = SolverConfig { dt: 0.05, exec, ..Default::default() };
        let solver = Solver::new(grid, cfg, Nonlinearity::Metric(MetricSpec::catalog(CatalogMetric::Sphere))).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &solver, |b, s| {
            b.iter(|| s.step(black_box(&z0)).unwrap())
        });
    }
    group.finish();
}

fn residual_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("residual_samples");
    group.sample_size(10);
    let psi = Psi::gaussian(1e-4, 1.0).unwrap();
    let profile = FinalStateProfile::new(psi, -2.0, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
    let grid = GridSpec::new(400.0, 8192).unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| residual_samples(&profile, black_box(20.0), &grid, exec).unwrap()));
    }
    group.finish();
}

fn vanishing_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_vanishing_points");
    group.sample_size(10);
    let spec = MetricSpec::catalog(CatalogMetric::Remark11 { c1: 0.5, c2: 0.0, c3: 0.0, c4: 0.25 });
    let region = Rect { x0: -1.5, x1: 1.5, y0: -1.5, y1: 1.5 };
    for (name, exec) in MODES {
        let opts = ScanOptions { exec, ..Default::default() };
        group.bench_function(name, |b| b.iter(|| scan_vanishing_points(&spec, region, 24, &opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, solver_step, residual_grid, vanishing_scan);
criterion_main!(benches);
