use smflow::diagnostics::{power_law_fit, SampledProfile};
use smflow::final_state::{residual, residual_grid, FinalStateProfile, Psi};
use smflow::metric::{CatalogMetric, MetricSpec, NormalFormCoefficients};
use smflow::par::Execution;
use smflow::Complex64 as C64;

fn nf(m: CatalogMetric) -> NormalFormCoefficients {
    NormalFormCoefficients::from_spec(&MetricSpec::catalog(m)).unwrap()
}

#[test]
fn sampled_profile_matches_analytic_gaussian() {
    let step = 0.01;
    let start = -12.0;
    let values = (0..2401).map(|k| C64::new(1e-3 * (-(start + k as f64 * step).powi(2) / 2.0).exp(), 0.0)).collect();
    let sampled = Psi::Sampled(SampledProfile { start, step, values });
    let exact = Psi::gaussian(1e-3, 1.0).unwrap();
    let n = nf(CatalogMetric::Sphere);
    let a = FinalStateProfile::for_flow(sampled, &n).unwrap();
    let b = FinalStateProfile::for_flow(exact, &n).unwrap();
    for &(t, x) in &[(5.0, 0.0), (5.0, 7.3), (40.0, -31.0), (200.0, 150.0)] {
        let (va, vb) = (a.v(t, x).unwrap(), b.v(t, x).unwrap());
        assert!((va - vb).norm() < 1e-9 * (1.0 + vb.norm()) + 1e-14, "t={t} x={x}: {va} vs {vb}");
    }
}

#[test]
fn hyperbolic_residual_decays_faster_than_profile() {
    let psi = Psi::gaussian(1e-4, 1.0).unwrap();
    let p = FinalStateProfile::for_flow(psi, &nf(CatalogMetric::Hyperbolic)).unwrap();
    let pts: Vec<(f64, f64)> = smflow::diagnostics::log_spaced(20.0, 160.0, 10)
        .into_iter()
        .map(|t| {
            let g = residual_grid(&p, t).unwrap();
            let r = residual(&p, t, &g, Execution::Parallel).unwrap();
            assert!(r.resolution_warning.is_none());
            (t, r.linf)
        })
        .collect();
    let fit = power_law_fit(&pts, (20.0, 160.0)).unwrap();
    assert!(fit.exponent < -2.0, "{}", fit.exponent);
}
