use std::path::Path;
use std::process::{Command, Output};

fn smflow(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smflow")).arg("--out").arg(out).args(args).output().expect("binary runs")
}

fn report(out: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

#[test]
fn analyze_metric_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = smflow(&["analyze-metric", "--metric", "sphere"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["experiment"], "analyze-metric");
    assert_eq!(r["config"]["metric"], "sphere");
    assert!((r["summary"]["curvature"].as_f64().unwrap() - 4.0).abs() < 1e-8);
    assert!(r["defaults_filled"].as_array().unwrap().iter().any(|k| k == "dt"));
    assert!(dir.path().join("metric.json").exists());
}

#[test]
fn unknown_metric_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = smflow(&["analyze-metric", "--metric", "torus"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("metric") && err.contains("torus"), "{err}");
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn config_file_errors_cite_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sphere check\nmetric=sphere\ndt=-1\n").unwrap();
    let o = smflow(&["--config", cfg.to_str().unwrap(), "analyze-metric"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("dt"), "{err}");
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "metric=flat\n").unwrap();
    let o = smflow(&["--config", cfg.to_str().unwrap(), "analyze-metric", "--metric", "hyperbolic"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(dir.path())["config"]["metric"], "hyperbolic");
}

#[test]
fn oversized_profile_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let o = smflow(&["final-state", "--psi", "gaussian:1,0.5"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds"));
}

#[test]
fn dichotomy_scan_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = smflow(&["scan-vanishing", "--metric", "remark11:0.5,0,0,0.25"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(dir.path());
    assert!(r["criteria"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn chart_exit_is_a_numeric_abort() {
    let dir = tempfile::tempdir().unwrap();
    let o = smflow(
        &["simulate", "--metric", "sphere", "--initial", "gaussian:5,1", "--t-end", "1", "--half-length", "32", "--n", "256", "--set", "fit_t0=0.1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn short_simulation_is_deterministic() {
    let run = |dir: &Path| {
        let o = smflow(
            &["simulate", "--metric", "sphere", "--t-end", "2", "--half-length", "32", "--n", "256", "--set", "fit_t0=0.1", "--set", "stride=8"],
            dir,
        );
        assert!(matches!(o.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(dir.join("series.csv")).unwrap()
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run(a.path()), run(b.path()));
}
