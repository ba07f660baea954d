use smflow::diagnostics::{energy, linear_fit};
use smflow::metric::{CatalogMetric, MetricSpec};
use smflow::spectral::{
    free_evolution, read_checkpoint, write_checkpoint, Direction, FieldState, GridSpec, InitialData, Integrator,
    Nonlinearity, Precision, Solver, SolverConfig, Spectral,
};
use smflow::{Complex64 as C64, SmfError};

fn sphere() -> Nonlinearity {
    Nonlinearity::Metric(MetricSpec::catalog(CatalogMetric::Sphere))
}

fn sup_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn run(grid: GridSpec, cfg: SolverConfig, nl: Nonlinearity, z0: &FieldState, t_end: f64) -> FieldState {
    Solver::new(grid, cfg, nl).unwrap().evolve(z0, t_end, &mut |_| Ok(())).unwrap()
}

#[test]
fn flat_run_equals_free_flow() {
    let g = GridSpec::new(64.0, 1024).unwrap();
    let z0 = InitialData::Gaussian { epsilon: 0.05, sigma0: 1.0 }.sample(g, 0.0);
    let cfg = SolverConfig { dt: 0.01, ..Default::default() };
    let z = run(g, cfg, Nonlinearity::Metric(MetricSpec::catalog(CatalogMetric::Flat)), &z0, 3.0);
    assert!(sup_diff(&z.z, &free_evolution(&z0, 3.0).z) < 1e-12);
}

#[test]
fn forward_backward_reversibility() {
    let g = GridSpec::new(64.0, 1024).unwrap();
    let z0 = InitialData::Gaussian { epsilon: 0.05, sigma0: 1.0 }.sample(g, 0.0);
    let cfg = SolverConfig { dt: 1e-3, diag_stride: 500, ..Default::default() };
    let fwd = run(g, cfg, sphere(), &z0, 1.0);
    let back = run(g, SolverConfig { direction: Direction::Backward, ..cfg }, sphere(), &fwd, 0.0);
    assert_eq!(back.t, 0.0);
    assert!(sup_diff(&back.z, &z0.z) < 1e-8);
}

#[test]
fn time_step_order_matches_scheme() {
    let g = GridSpec::new(32.0, 512).unwrap();
    let z0 = InitialData::Gaussian { epsilon: 0.2, sigma0: 1.0 }.sample(g, 0.0);
    for integ in [Integrator::Ifrk4, Integrator::Strang] {
        let dts = [0.1, 0.05, 0.025, 0.0125];
        let sol: Vec<FieldState> = dts
            .iter()
            .chain(std::iter::once(&0.00625))
            .map(|&dt| run(g, SolverConfig { dt, integrator: integ, ..Default::default() }, sphere(), &z0, 2.0))
            .collect();
        let x: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
        let y: Vec<f64> = (0..4).map(|k| sup_diff(&sol[k].z, &sol[k + 1].z).ln()).collect();
        let (order, _, _) = linear_fit(&x, &y).unwrap();
        match integ {
            Integrator::Ifrk4 => assert!((order - 4.0).abs() < 0.4, "{integ:?}: {order}"),
            Integrator::Strang => assert!((order - 2.0).abs() < 0.3, "{integ:?}: {order}"),
        }
    }
}

#[test]
fn resolution_doubling_is_invisible() {
    let coarse = GridSpec::new(64.0, 1024).unwrap();
    let fine = coarse.doubled();
    let data = InitialData::Gaussian { epsilon: 0.05, sigma0: 1.0 };
    let cfg = SolverConfig { dt: 0.01, ..Default::default() };
    let a = run(coarse, cfg, sphere(), &data.sample(coarse, 0.0), 1.0);
    let b = run(fine, cfg, sphere(), &data.sample(fine, 0.0), 1.0);
    let sub: Vec<C64> = b.z.iter().step_by(2).copied().collect();
    assert!(sup_diff(&a.z, &sub) < 1e-8);
    assert!((a.l2() - b.l2()).abs() < 1e-8);
}

#[test]
fn sphere_energy_is_conserved() {
    let g = GridSpec::new(128.0, 2048).unwrap();
    let spec = MetricSpec::catalog(CatalogMetric::Sphere);
    let sp = Spectral::new(g);
    let z0 = InitialData::Gaussian { epsilon: 0.1, sigma0: 1.0 }.sample(g, 0.0);
    let e0 = energy(&sp, &z0, &spec);
    let mut worst: f64 = 0.0;
    let cfg = SolverConfig { dt: 0.01, diag_stride: 50, ..Default::default() };
    Solver::new(g, cfg, Nonlinearity::Metric(spec.clone()))
        .unwrap()
        .evolve(&z0, 10.0, &mut |s| {
            worst = worst.max((energy(&sp, s, &spec) - e0).abs() / e0);
            Ok(())
        })
        .unwrap();
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn large_data_leaves_chart() {
    let g = GridSpec::new(32.0, 512).unwrap();
    let z0 = InitialData::Gaussian { epsilon: 0.35, sigma0: 1.0 }.sample(g, 0.0);
    let s = Solver::new(g, SolverConfig::default(), sphere()).unwrap();
    assert!(matches!(s.evolve(&z0, 1.0, &mut |_| Ok(())), Err(SmfError::ChartExit { .. })));
}

#[test]
fn narrow_domain_reports_boundary_mass() {
    let g = GridSpec::new(16.0, 256).unwrap();
    let z0 = InitialData::Gaussian { epsilon: 0.05, sigma0: 1.0 }.sample(g, 0.0);
    let s = Solver::new(g, SolverConfig { dt: 0.05, diag_stride: 10, ..Default::default() }, sphere()).unwrap();
    assert!(matches!(s.evolve(&z0, 20.0, &mut |_| Ok(())), Err(SmfError::BoundaryMass { .. })));
}

#[test]
fn checkpoint_restart_continues_identically() {
    let dir = std::env::temp_dir().join(format!("smflow-ckpt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mid.ckpt");
    let g = GridSpec::new(32.0, 512).unwrap();
    let z0 = InitialData::Sech { epsilon: 0.05, sigma0: 1.0 }.sample(g, 0.0);
    let cfg = SolverConfig { dt: 0.01, ..Default::default() };
    let straight = run(g, cfg, sphere(), &z0, 1.0);
    let mid = run(g, cfg, sphere(), &z0, 0.5);
    write_checkpoint(&path, &mid, Precision::Complex128).unwrap();
    let resumed = run(g, cfg, sphere(), &read_checkpoint(&path).unwrap(), 1.0);
    assert!(sup_diff(&straight.z, &resumed.z) < 1e-14);
    std::fs::remove_dir_all(&dir).unwrap();
}
