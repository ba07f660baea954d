//! Experiment pipelines behind each subcommand.

use crate::checks::{self, FrequencyRecord};
use crate::config::{ExperimentConfig, ExperimentKind, ParsedConfig, PsiSpec};
use crate::error::{Context, Result, WorkbenchError};
use crate::report::{CriterionResult, RunReport};
use crate::tolerances::*;
use serde::Serialize;
use serde_json::json;
use smflow::diagnostics::{
    log_spaced, power_law_fit, record_run, rigidity_probe, Column, DiagnosticSeries, FitResult, RecorderConfig, SampledProfile,
};
use smflow::final_state::{
    backward_run, compare_runs, m_theta_margin, residual, residual_grid, Ablation, FinalStateProfile, Psi, StabilityReport,
    WaveOperatorConfig, WaveOperatorRun,
};
use smflow::metric::{scan_vanishing_points, CatalogMetric, MetricSpec, NormalFormCoefficients, ScanOptions};
use smflow::par::Execution;
use smflow::spectral::{GridSpec, Nonlinearity, Solver, SolverConfig};
use smflow::Complex64 as C64;
use std::fmt::Write as _;
use std::path::Path;

pub const CLASS_MODIFIED: &str = "intrinsic vanishing, K≠0 ⇒ modified-scattering regime";
pub const CLASS_SCATTERING: &str = "intrinsic vanishing, K=0 ⇒ scattering regime";
pub const CLASS_NONVANISHING: &str = "not an intrinsic vanishing point ⇒ outside the small-data regime";

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn normal_form(metric: CatalogMetric) -> Result<NormalFormCoefficients> {
    NormalFormCoefficients::from_spec(&MetricSpec::catalog(metric)).context(format!("normal form of {metric}"))
}

pub fn classify(nf: &NormalFormCoefficients) -> &'static str {
    if !nf.is_vanishing_point(VANISHING_TOL) {
        CLASS_NONVANISHING
    } else if nf.curvature.abs() > ZERO_CURVATURE_TOL {
        CLASS_MODIFIED
    } else {
        CLASS_SCATTERING
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricAnalysis {
    pub metric: String,
    pub curvature: f64,
    pub h0: f64,
    pub c: Vec<[f64; 2]>,
    pub gamma: Vec<[f64; 2]>,
    pub nu: Vec<[f64; 2]>,
    pub vanishing_residual: [f64; 2],
    pub classification: String,
}

pub fn analyze_metric(metric: CatalogMetric) -> Result<MetricAnalysis> {
    let nf = normal_form(metric)?;
    Ok(MetricAnalysis {
        metric: metric.to_string(),
        curvature: nf.curvature,
        h0: nf.h0,
        c: nf.c.iter().copied().map(pair).collect(),
        gamma: nf.gamma.iter().copied().map(pair).collect(),
        nu: nf.nu.iter().copied().map(pair).collect(),
        vanishing_residual: pair(nf.vanishing_residual),
        classification: classify(&nf).into(),
    })
}

pub fn solver_config(cfg: &ExperimentConfig) -> SolverConfig {
    SolverConfig {
        dt: cfg.dt,
        integrator: cfg.integrator,
        dealias_fraction: cfg.dealias,
        diag_stride: cfg.stride,
        chart_radius: cfg.chart_radius,
        boundary_tol: cfg.boundary_tol,
        ..Default::default()
    }
}

/// Forward run with its recorded diagnostics.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub metric: CatalogMetric,
    pub normal_form: NormalFormCoefficients,
    pub series: DiagnosticSeries,
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<Simulation> {
    let nf = normal_form(cfg.metric)?;
    let grid = GridSpec::new(cfg.half_length, cfg.n).context("grid")?;
    let solver = Solver::new(grid, solver_config(cfg), Nonlinearity::Metric(MetricSpec::catalog(cfg.metric))).context("solver")?;
    let z0 = cfg.initial.0.sample(grid, 0.0);
    let rec = RecorderConfig { keep_profile: false, ..RecorderConfig::from_normal_form(&nf) };
    let (series, _, _) = record_run(&solver, &z0, cfg.t_end, rec).context(format!("forward run on {}", cfg.metric))?;
    Ok(Simulation { metric: cfg.metric, normal_form: nf, series })
}

fn max_relative_drift(values: &[(f64, f64)]) -> f64 {
    let v0 = values[0].1;
    values.iter().map(|(_, v)| (v - v0).abs() / v0.abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max)
}

/// Exact conservation laws of the run: the intrinsic energy always, the L² mass when the flow is free.
pub fn conservation_checks(sim: &Simulation) -> Vec<CriterionResult> {
    let drift = max_relative_drift(&sim.series.column(Column::Energy));
    let mut rows = vec![CriterionResult::new(
        "A4",
        "intrinsic energy relative drift",
        drift < ENERGY_DRIFT_TOL,
        format!("{drift:.3e}"),
        format!("< {ENERGY_DRIFT_TOL:e}"),
    )];
    if sim.metric == CatalogMetric::Flat {
        let m = max_relative_drift(&sim.series.column(Column::Mass));
        rows.push(CriterionResult::new("A4", "L2 mass relative drift (free flow)", m < FLAT_FREE_TOL, format!("{m:.3e}"), format!("< {FLAT_FREE_TOL:e}")));
    }
    rows
}

fn covers_dyadic_times(series: &DiagnosticSeries) -> bool {
    DYADIC_TIMES.iter().all(|&t| series.row_near(t).is_some_and(|i| (series.rows[i].t - t).abs() <= 1e-6 * t))
}

/// Named long-time fits of a forward run.
pub type NamedFits = Vec<(String, Option<FitResult>)>;

/// Acceptance rows that apply to a forward run, given its regime.
pub fn simulation_checks(sim: &Simulation, window: (f64, f64)) -> (Vec<CriterionResult>, NamedFits, Vec<FrequencyRecord>) {
    let mut rows = conservation_checks(sim);
    let class = classify(&sim.normal_form);
    let (decay, fits) = checks::decay_checks(&sim.series, window);
    let records = checks::frequency_records(&sim.series, window.0);
    if class != CLASS_NONVANISHING && covers_dyadic_times(&sim.series) {
        rows.extend(decay);
        if class == CLASS_MODIFIED {
            rows.extend(checks::modified_scattering_checks(&records));
        } else {
            rows.extend(checks::plain_scattering_checks(&records));
        }
    }
    (rows, fits, records)
}

/// Reads ψ samples `y re im` (whitespace or comma separated, `#` comments) on a uniform grid.
pub fn load_psi_file(path: &Path) -> Result<Psi> {
    let text = std::fs::read_to_string(path).map_err(|e| WorkbenchError::io(path, e))?;
    let bad = |line: usize, msg: String| WorkbenchError::Numeric {
        context: format!("{}:{line}", path.display()),
        source: smflow::SmfError::InvalidInput(msg),
    };
    let mut ys = Vec::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let f: std::result::Result<Vec<f64>, _> = body.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(str::parse).collect();
        match f {
            Ok(v) if v.len() == 3 && v.iter().all(|x| x.is_finite()) => {
                ys.push(v[0]);
                values.push(C64::new(v[1], v[2]));
            }
            _ => return Err(bad(i + 1, format!("expected three numbers 'y re im', found '{body}'"))),
        }
    }
    if ys.len() < 4 {
        return Err(bad(0, "need at least four samples".into()));
    }
    let step = ys[1] - ys[0];
    if !(step > 0.0) || ys.windows(2).any(|p| ((p[1] - p[0]) - step).abs() > 1e-9 * step.abs().max(1.0)) {
        return Err(bad(0, "samples must be equally spaced in increasing y".into()));
    }
    Ok(Psi::Sampled(SampledProfile { start: ys[0], step, values }))
}

pub fn build_psi(spec: &PsiSpec) -> Result<Psi> {
    match spec {
        PsiSpec::Gaussian { sigma, amplitude } => Psi::gaussian(*amplitude, *sigma).context("ψ"),
        PsiSpec::File(p) => load_psi_file(p),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Smallness {
    pub m: usize,
    pub eps_star: f64,
    pub weighted_norm: f64,
    /// (θ, margin of −θ + 9(θ+1)/(2m) + ½, margin < 0).
    pub m_theta: Vec<(f64, f64, bool)>,
}

pub fn smallness(psi: &Psi, m: usize, eps_star: f64) -> Result<Smallness> {
    let weighted_norm = psi.check_smallness(m, eps_star).context("ψ smallness")?;
    let m_theta = [0.6, 0.75, 0.9].iter().map(|&th| {
        let g = m_theta_margin(m, th);
        (th, g, g < 0.0)
    });
    Ok(Smallness { m, eps_star, weighted_norm, m_theta: m_theta.collect() })
}

#[derive(Debug, Clone)]
pub struct ResidualSeries {
    pub times: Vec<f64>,
    pub linf: Vec<f64>,
    pub l2: Vec<f64>,
    pub resolution_warnings: Vec<f64>,
    pub fit_linf: Option<FitResult>,
    pub fit_l2: Option<FitResult>,
}

pub fn residual_series(profile: &FinalStateProfile, times: &[f64], exec: Execution) -> Result<ResidualSeries> {
    let mut out = ResidualSeries { times: times.to_vec(), linf: vec![], l2: vec![], resolution_warnings: vec![], fit_linf: None, fit_l2: None };
    for &t in times {
        let grid = residual_grid(profile, t).context("residual grid")?;
        let r = residual(profile, t, &grid, exec).context(format!("residual at t = {t}"))?;
        out.linf.push(r.linf);
        out.l2.push(r.l2);
        if r.resolution_warning.is_some() {
            out.resolution_warnings.push(t);
        }
    }
    let window = (times[0], times[times.len() - 1]);
    let pts = |v: &[f64]| times.iter().copied().zip(v.iter().copied()).collect::<Vec<_>>();
    out.fit_linf = power_law_fit(&pts(&out.linf), window).ok();
    out.fit_l2 = power_law_fit(&pts(&out.l2), window).ok();
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct WaveStudy {
    pub runs: Vec<WaveOperatorRun>,
    /// Two-horizon comparisons (N/2 vs N) and (N vs 2N); the first is absent when N/2 < 4·N₀.
    pub stability: Vec<StabilityReport>,
}

/// Backward runs from N/2 (when admissible), N and 2N sharing one set of recording times.
pub fn wave_study(profile: &FinalStateProfile, metric: CatalogMetric, cfg: &ExperimentConfig) -> Result<WaveStudy> {
    let spec = MetricSpec::catalog(metric);
    let nf = normal_form(metric)?;
    let grid = GridSpec::new(cfg.wave_half_length, cfg.wave_n).context("wave grid")?;
    let solver = SolverConfig { dt: cfg.wave_dt, ..solver_config(cfg) };
    let wcfg = |n: f64| WaveOperatorConfig { n_final: n, n0: cfg.n0, grid, solver, samples: cfg.wave_samples };
    wcfg(cfg.n_final).validate().context("wave-operator configuration")?;
    let half = cfg.n_final / 2.0;
    let horizons: Vec<f64> = if half >= 4.0 * cfg.n0 { vec![half, cfg.n_final, 2.0 * cfg.n_final] } else { vec![cfg.n_final, 2.0 * cfg.n_final] };
    let mut times: Vec<f64> = horizons[..horizons.len() - 1].iter().flat_map(|&n| wcfg(n).times()).collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * *b);
    let mut runs = Vec::new();
    for &n in &horizons {
        let mut ts = times.clone();
        ts.push(n);
        let mut run = backward_run(profile, &spec, &nf, n, &ts, grid, solver).context(format!("backward run from N = {n}"))?;
        // the fit uses the window [N₀, N/4] of the run's own schedule
        let own: Vec<(f64, f64)> = run.times.iter().copied().zip(run.gap_l2.iter().copied()).collect();
        run.fit = power_law_fit(&own, (cfg.n0, n / 4.0)).ok();
        runs.push(run);
    }
    let stability = runs.windows(2).map(|p| compare_runs(p[0].clone(), p[1].clone())).collect();
    Ok(WaveStudy { runs, stability })
}

pub fn gap_csv(study: &WaveStudy) -> String {
    let mut s = String::from("n_final,t,gap_l2,gap_h1\n");
    for r in &study.runs {
        for i in 0..r.times.len() {
            writeln!(s, "{:e},{:e},{:e},{:e}", r.n_final, r.times[i], r.gap_l2[i], r.gap_h1[i]).unwrap();
        }
    }
    s
}

fn stability_json(s: &StabilityReport) -> serde_json::Value {
    json!({"n": s.n, "n_prime": s.n_prime, "sup_gap": s.sup_gap, "sup_gap_to_v": s.sup_gap_to_v, "within_heuristic": s.within_heuristic})
}

pub struct FinalStateOutcome {
    pub smallness: Smallness,
    pub full: ResidualSeries,
    pub v1_only: ResidualSeries,
    pub wave: Option<WaveStudy>,
    pub criteria: Vec<CriterionResult>,
}

/// Residual series of the configured profile and of v₁ alone, plus the wave-operator study
/// unless `residual_only`.
pub fn final_state(cfg: &ExperimentConfig, residual_only: bool) -> Result<FinalStateOutcome> {
    let nf = normal_form(cfg.metric)?;
    let psi = build_psi(&cfg.psi)?;
    let smallness = smallness(&psi, cfg.m, cfg.eps_star)?;
    let profile = FinalStateProfile::for_flow(psi, &nf).context("final-state profile")?.with_form(cfg.correction).with_ablation(cfg.ablate);
    let v1 = profile.clone().with_ablation(Ablation { tail: cfg.ablate.tail, ..Ablation::v1_only() });
    let times = log_spaced(cfg.residual_t0, cfg.residual_t1, cfg.residual_samples);
    let exec = Execution::default();
    let full = residual_series(&profile, &times, exec)?;
    let v1_only = residual_series(&v1, &times, exec)?;
    let mut criteria = Vec::new();
    if cfg.metric == CatalogMetric::Sphere && cfg.ablate == Ablation::default() {
        criteria.extend(checks::residual_checks(full.fit_linf.as_ref(), v1_only.fit_linf.as_ref()));
    }
    let wave = if residual_only {
        None
    } else {
        let study = wave_study(&profile, cfg.metric, cfg)?;
        if cfg.metric == CatalogMetric::Sphere && study.stability.len() == 2 {
            let main = &study.runs[1];
            criteria.extend(checks::wave_operator_checks(main.fit.as_ref(), &study.stability[0], &study.stability[1]));
        }
        Some(study)
    };
    Ok(FinalStateOutcome { smallness, full, v1_only, wave, criteria })
}

pub fn residual_csv(o: &FinalStateOutcome) -> String {
    let mut s = String::from("t,linf,l2,linf_v1,l2_v1\n");
    for i in 0..o.full.times.len() {
        writeln!(s, "{:e},{:e},{:e},{:e},{:e}", o.full.times[i], o.full.linf[i], o.full.l2[i], o.v1_only.linf[i], o.v1_only.l2[i]).unwrap();
    }
    s
}

fn fit_json(f: &Option<FitResult>) -> serde_json::Value {
    match f {
        Some(f) => json!({"exponent": f.exponent, "intercept": f.intercept, "r_squared": f.r_squared, "window": [f.window.0, f.window.1]}),
        None => serde_json::Value::Null,
    }
}

fn out_dir(cfg: &ExperimentConfig) -> Result<&Path> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| WorkbenchError::io(&cfg.out_dir, e))?;
    Ok(&cfg.out_dir)
}

/// Runs the configured experiment, writes its artifacts and returns the report.
pub fn run(parsed: &ParsedConfig) -> Result<RunReport> {
    let cfg = &parsed.config;
    let mut report = RunReport::new(parsed);
    match cfg.experiment {
        ExperimentKind::AnalyzeMetric => {
            let a = analyze_metric(cfg.metric)?;
            report.summary = serde_json::to_value(&a).unwrap();
            let dir = out_dir(cfg)?;
            report.emit(dir, "metric.json", &serde_json::to_string_pretty(&a).unwrap())?;
        }
        ExperimentKind::Simulate => {
            let sim = simulate(cfg)?;
            let (rows, fits, records) = simulation_checks(&sim, (cfg.fit_t0, cfg.t_end));
            report.criteria = rows;
            report.summary = json!({
                "classification": classify(&sim.normal_form),
                "c_phase": sim.normal_form.c_phase,
                "rows": sim.series.rows.len(),
                "fits": fits.iter().map(|(k, f)| (k.clone(), fit_json(f))).collect::<serde_json::Map<_, _>>(),
                "frequencies": records,
            });
            let dir = out_dir(cfg)?;
            report.emit(dir, "series.csv", &sim.series.to_csv())?;
            report.emit(dir, "frequencies.csv", &sim.series.frequency_csv())?;
        }
        ExperimentKind::FinalState => {
            let o = final_state(cfg, false)?;
            let wave = o.wave.as_ref().map(|w| {
                json!({
                    "runs": w.runs.iter().map(|r| json!({"n_final": r.n_final, "fit": fit_json(&r.fit)})).collect::<Vec<_>>(),
                    "stability": w.stability.iter().map(stability_json).collect::<Vec<_>>(),
                })
            });
            report.summary = json!({
                "smallness": o.smallness,
                "residual": {"fit_linf": fit_json(&o.full.fit_linf), "fit_l2": fit_json(&o.full.fit_l2), "resolution_warnings": o.full.resolution_warnings},
                "residual_v1_only": {"fit_linf": fit_json(&o.v1_only.fit_linf), "fit_l2": fit_json(&o.v1_only.fit_l2)},
                "wave_operator": wave,
            });
            report.criteria = o.criteria.clone();
            let dir = out_dir(cfg)?;
            report.emit(dir, "residual.json", &serde_json::to_string_pretty(&report.summary).unwrap())?;
            report.emit(dir, "residual.csv", &residual_csv(&o))?;
            if let Some(w) = &o.wave {
                report.emit(dir, "gaps.csv", &gap_csv(w))?;
            }
        }
        ExperimentKind::RigidityProbe => {
            let grid = GridSpec::new(cfg.half_length, cfg.n).context("grid")?;
            let solver = Solver::new(grid, solver_config(cfg), Nonlinearity::Metric(MetricSpec::catalog(cfg.metric))).context("solver")?;
            let z0 = cfg.initial.0.sample(grid, 0.0);
            let r = rigidity_probe(&solver, &z0, cfg.t_end).context("rigidity probe")?;
            report.summary = json!({
                "metric": cfg.metric.to_string(),
                "classification": classify(&normal_form(cfg.metric)?),
                "zhat_linf_vs_ln_t": r.zhat_log_slope.map(|(s, i)| json!({"slope": s, "intercept": i})),
                "t_z_zx_fit": fit_json(&r.tzzx_fit),
                "zhat_class": r.zhat_class.as_str(),
                "t_z_zx_class": r.tzzx_class.as_str(),
                "note": "qualitative report; not an acceptance criterion",
            });
            let mut csv = String::from("t,zhat_linf,t_z_zx_l2\n");
            for (t, a, b) in &r.rows {
                writeln!(csv, "{t:e},{a:e},{b:e}").unwrap();
            }
            let dir = out_dir(cfg)?;
            report.emit(dir, "rigidity.csv", &csv)?;
        }
        ExperimentKind::ScanVanishing => {
            let spec = MetricSpec::catalog(cfg.metric);
            let rep = scan_vanishing_points(&spec, cfg.scan_region, cfg.scan_resolution, &ScanOptions::default()).context("vanishing-point scan")?;
            report.summary = json!({
                "metric": cfg.metric.to_string(),
                "identically_vanishing": rep.identically_vanishing,
                "nodes_evaluated": rep.nodes_evaluated,
                "points": rep.points.iter().map(|p| json!({"z": pair(p.z), "residual": p.residual, "curvature": p.curvature})).collect::<Vec<_>>(),
            });
            if let CatalogMetric::Remark11 { .. } = cfg.metric {
                report.criteria = crate::acceptance::dichotomy_checks(cfg.metric, &rep);
            }
            let dir = out_dir(cfg)?;
            report.emit(dir, "scan.json", &serde_json::to_string_pretty(&report.summary).unwrap())?;
        }
        ExperimentKind::ReproduceAll => {
            let suite = crate::acceptance::run_suite(&crate::acceptance::SuiteOptions { quick: cfg.quick, seed: cfg.seed, out_dir: Some(cfg.out_dir.clone()) })?;
            report.criteria = suite.criteria();
            report.summary = suite.summary_json();
            let dir = out_dir(cfg)?;
            report.emit(dir, "summary.md", &crate::report::summary_table(&report.criteria))?;
        }
    }
    let dir = out_dir(cfg)?.to_path_buf();
    report.write(&dir)?;
    Ok(report)
}
