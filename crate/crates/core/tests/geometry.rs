use proptest::prelude::*;
use smflow::metric::{
    holomorphic_pushforward_check, log_metric_jet, scan_vanishing_points, CatalogMetric, JetOptions, MetricSpec,
    NormalFormCoefficients, Rect, ScanOptions,
};
use smflow::Complex64 as C64;

fn nf(m: CatalogMetric) -> NormalFormCoefficients {
    NormalFormCoefficients::from_spec(&MetricSpec::catalog(m)).unwrap()
}

#[test]
fn catalog_identities() {
    for m in CatalogMetric::all_default() {
        let spec = MetricSpec::catalog(m);
        let jet = log_metric_jet(&spec, 4, &JetOptions::default()).unwrap();
        assert!(jet.max_asymmetry() < 1e-10, "{m}");
        let n = NormalFormCoefficients::from_jet(&jet).unwrap();
        for (name, d) in n.identity_defects() {
            let tol = if name == "c = c1" { 1e-8 } else { 1e-10 };
            assert!(d < tol, "{m}: {name} off by {d}");
        }
    }
}

#[test]
fn sphere_and_hyperbolic_constants() {
    let s = nf(CatalogMetric::Sphere);
    assert!((s.curvature - 4.0).abs() < 1e-10);
    assert!((s.c_phase + 2.0).abs() < 1e-10);
    assert!(s.vanishing_residual.norm() < 1e-8);
    let h = nf(CatalogMetric::Hyperbolic);
    assert!((h.curvature + 1.0).abs() < 1e-10);
    assert!(h.vanishing_residual.norm() < 1e-8);
}

#[test]
fn two_point_vanishing_dichotomy() {
    let spec = MetricSpec::catalog(CatalogMetric::Remark11 { c1: 0.5, c2: 0.0, c3: 0.0, c4: 0.25 });
    let region = Rect { x0: -0.6, x1: 1.6, y0: -0.8, y1: 0.8 };
    let rep = scan_vanishing_points(&spec, region, 20, &ScanOptions::default()).unwrap();
    assert!(!rep.identically_vanishing);
    let near = |z: C64| rep.points.iter().find(|p| (p.z - z).norm() < 1e-6);
    let p0 = near(C64::new(0.0, 0.0)).expect("zero at 0");
    let p1 = near(C64::new(1.0, 0.0)).expect("zero at 1");
    assert!(p0.curvature.abs() < 1e-8);
    assert!((p1.curvature + 2.0 * (-1.25f64).exp()).abs() < 1e-6);
}

#[test]
fn nonvanishing_metrics_are_not_vanishing_at_origin() {
    assert!(!nf(CatalogMetric::NonvanishingA { a: 0.5 }).is_vanishing_point(1e-8));
    assert!(!nf(CatalogMetric::C5Nonzero).is_vanishing_point(1e-8));
}

fn map_strategy() -> impl Strategy<Value = Vec<C64>> {
    (0.5f64..2.0, 0.0..std::f64::consts::TAU, prop::collection::vec((-0.5f64..0.5, -0.5f64..0.5), 3)).prop_map(
        |(r, th, rest)| {
            let mut f = vec![C64::from_polar(r, th)];
            f.extend(rest.into_iter().map(|(a, b)| C64::new(a, b)));
            f
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn pushforward_law_holds(f in map_strategy(), k in 0usize..7) {
        let m = CatalogMetric::all_default()[k];
        let jet = log_metric_jet(&MetricSpec::catalog(m), 4, &JetOptions::default()).unwrap();
        let chk = holomorphic_pushforward_check(&jet, &f).unwrap();
        prop_assert!(chk.defect() < 1e-7 * (1.0 + chk.rhs.norm()), "{m}: {chk:?}");
    }

    #[test]
    fn normal_form_round_trip(re in -0.2f64..0.2, im in -0.2f64..0.2, k in 0usize..7) {
        let n = nf(CatalogMetric::all_default()[k]);
        let z = vec![C64::new(re, im)];
        let w = smflow::metric::forward_transform(&z, &n.gamma);
        let back = smflow::metric::inverse_transform(&w, &n.gamma).unwrap();
        prop_assert!((back[0] - z[0]).norm() < 1e-13);
    }
}
