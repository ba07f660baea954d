//! Plain-text `key=value` configuration.
//!
//! Grammar: tokens of the form `key=value` separated by whitespace or newlines; `#` starts a
//! comment that runs to the end of the line. Values may not contain whitespace. Every key may
//! appear at most once, and unknown keys are rejected.

use crate::error::{Location, ParseError};
use smflow::final_state::{Ablation, CorrectionForm};
use smflow::metric::{CatalogMetric, Rect};
use smflow::spectral::{InitialData, Integrator};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    AnalyzeMetric,
    Simulate,
    FinalState,
    RigidityProbe,
    ScanVanishing,
    ReproduceAll,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::AnalyzeMetric,
        ExperimentKind::Simulate,
        ExperimentKind::FinalState,
        ExperimentKind::RigidityProbe,
        ExperimentKind::ScanVanishing,
        ExperimentKind::ReproduceAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::AnalyzeMetric => "analyze-metric",
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::FinalState => "final-state",
            ExperimentKind::RigidityProbe => "rigidity-probe",
            ExperimentKind::ScanVanishing => "scan-vanishing",
            ExperimentKind::ReproduceAll => "reproduce-all",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ExperimentKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown experiment '{s}' (known: {})", names.join(", "))
        })
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Initial datum z(0) for forward runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialSpec(pub InitialData);

impl fmt::Display for InitialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            InitialData::Gaussian { epsilon, sigma0 } => write!(f, "gaussian:{epsilon},{sigma0}"),
            InitialData::GaussianPoly { epsilon, sigma0, degree } => write!(f, "gaussian-poly:{epsilon},{sigma0},{degree}"),
            InitialData::Sech { epsilon, sigma0 } => write!(f, "sech:{epsilon},{sigma0}"),
        }
    }
}

fn numbers(raw: &str, n: usize, what: &str) -> Result<Vec<f64>, String> {
    let v: Result<Vec<f64>, _> = raw.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if v.len() == n && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(format!("{what} expects {n} comma-separated finite numbers, got '{raw}'")),
    }
}

impl FromStr for InitialSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| format!("initial data '{s}' must look like kind:params"))?;
        let data = match kind {
            "gaussian" => {
                let p = numbers(rest, 2, "gaussian:ε,σ₀")?;
                InitialData::Gaussian { epsilon: p[0], sigma0: p[1] }
            }
            "sech" => {
                let p = numbers(rest, 2, "sech:ε,σ₀")?;
                InitialData::Sech { epsilon: p[0], sigma0: p[1] }
            }
            "gaussian-poly" => {
                let p = numbers(rest, 3, "gaussian-poly:ε,σ₀,degree")?;
                if p[2] < 0.0 || p[2].fract() != 0.0 {
                    return Err(format!("polynomial degree must be a non-negative integer, got {}", p[2]));
                }
                InitialData::GaussianPoly { epsilon: p[0], sigma0: p[1], degree: p[2] as u32 }
            }
            other => return Err(format!("unknown initial data '{other}' (known: gaussian, sech, gaussian-poly)")),
        };
        let sigma0 = match data {
            InitialData::Gaussian { sigma0, .. } | InitialData::Sech { sigma0, .. } | InitialData::GaussianPoly { sigma0, .. } => sigma0,
        };
        if sigma0 <= 0.0 {
            return Err(format!("width σ₀ must be positive, got {sigma0}"));
        }
        Ok(InitialSpec(data))
    }
}

/// Asymptotic profile ψ: a Gaussian `gaussian:σ,amp` or a sampled file `file:path`.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiSpec {
    Gaussian { sigma: f64, amplitude: f64 },
    File(PathBuf),
}

impl fmt::Display for PsiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiSpec::Gaussian { sigma, amplitude } => write!(f, "gaussian:{sigma},{amplitude}"),
            PsiSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for PsiSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            Some(("gaussian", rest)) => {
                let p = numbers(rest, 2, "gaussian:σ,amp")?;
                if p[0] <= 0.0 {
                    return Err(format!("ψ width σ must be positive, got {}", p[0]));
                }
                Ok(PsiSpec::Gaussian { sigma: p[0], amplitude: p[1] })
            }
            Some(("file", path)) if !path.is_empty() => Ok(PsiSpec::File(PathBuf::from(path))),
            _ => Err(format!("ψ '{s}' must be gaussian:σ,amp or file:path")),
        }
    }
}

fn integrator_name(i: Integrator) -> &'static str {
    match i {
        Integrator::Ifrk4 => "ifrk4",
        Integrator::Strang => "strang",
    }
}

fn parse_integrator(s: &str) -> Result<Integrator, String> {
    match s {
        "ifrk4" => Ok(Integrator::Ifrk4),
        "strang" => Ok(Integrator::Strang),
        other => Err(format!("unknown integrator '{other}' (known: ifrk4, strang)")),
    }
}

fn correction_name(c: CorrectionForm) -> &'static str {
    match c {
        CorrectionForm::Consistent => "consistent",
        CorrectionForm::Printed => "printed",
    }
}

fn parse_correction(s: &str) -> Result<CorrectionForm, String> {
    match s {
        "consistent" => Ok(CorrectionForm::Consistent),
        "printed" => Ok(CorrectionForm::Printed),
        other => Err(format!("unknown correction form '{other}' (known: consistent, printed)")),
    }
}

pub fn ablation_string(a: &Ablation) -> String {
    let mut parts = Vec::new();
    for (on, name) in [(a.v2, "v2"), (a.v3, "v3"), (a.v4, "v4"), (a.tail, "tail")] {
        if on {
            parts.push(name);
        }
    }
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(",")
    }
}

fn parse_ablation(s: &str) -> Result<Ablation, String> {
    if s == "none" {
        return Ok(Ablation::default());
    }
    s.parse::<Ablation>().map_err(|e| e.to_string())
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("expected true or false, got '{other}'")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub metric: CatalogMetric,
    // forward evolution
    pub initial: InitialSpec,
    pub half_length: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub stride: usize,
    pub integrator: Integrator,
    pub dealias: f64,
    pub chart_radius: f64,
    pub boundary_tol: f64,
    pub fit_t0: f64,
    // final-state profile and wave operator
    pub psi: PsiSpec,
    pub correction: CorrectionForm,
    pub ablate: Ablation,
    pub m: usize,
    pub eps_star: f64,
    pub residual_t0: f64,
    pub residual_t1: f64,
    pub residual_samples: usize,
    pub n_final: f64,
    pub n0: f64,
    pub wave_samples: usize,
    pub wave_dt: f64,
    pub wave_half_length: f64,
    pub wave_n: usize,
    // vanishing-point scan
    pub scan_region: Rect,
    pub scan_resolution: usize,
    // run control
    pub out_dir: PathBuf,
    pub seed: u64,
    pub quick: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::AnalyzeMetric,
            metric: CatalogMetric::Sphere,
            initial: InitialSpec(InitialData::Gaussian { epsilon: 0.05, sigma0: 1.0 }),
            half_length: 4096.0,
            n: 32768,
            dt: 1.0 / 32.0,
            t_end: 200.0,
            stride: 32,
            integrator: Integrator::Ifrk4,
            dealias: 2.0 / 3.0,
            chart_radius: smflow::metric::DEFAULT_CHART_RADIUS,
            boundary_tol: 1e-8,
            fit_t0: 10.0,
            psi: PsiSpec::Gaussian { sigma: 1.0, amplitude: 1e-4 },
            correction: CorrectionForm::Consistent,
            ablate: Ablation::default(),
            m: smflow::final_state::DEFAULT_M,
            eps_star: smflow::final_state::DEFAULT_EPS_STAR,
            residual_t0: 20.0,
            residual_t1: 500.0,
            residual_samples: 16,
            n_final: 200.0,
            n0: 10.0,
            wave_samples: 12,
            wave_dt: 0.05,
            wave_half_length: 4096.0,
            wave_n: 32768,
            scan_region: Rect { x0: -0.6, x1: 1.6, y0: -0.8, y1: 0.8 },
            scan_resolution: 24,
            out_dir: PathBuf::from("smflow-out"),
            seed: 0,
            quick: false,
        }
    }
}

/// Every recognised key in serialisation order.
pub const KEYS: [&str; 32] = [
    "experiment",
    "metric",
    "initial",
    "half_length",
    "n",
    "dt",
    "t_end",
    "stride",
    "integrator",
    "dealias",
    "chart_radius",
    "boundary_tol",
    "fit_t0",
    "psi",
    "correction",
    "ablate",
    "m",
    "eps_star",
    "residual_t0",
    "residual_t1",
    "residual_samples",
    "n_final",
    "n0",
    "wave_samples",
    "wave_dt",
    "wave_half_length",
    "wave_n",
    "scan_region",
    "scan_resolution",
    "out_dir",
    "seed",
    "quick",
];

/// Result of parsing: the validated configuration and the keys that were filled by defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub config: ExperimentConfig,
    pub defaulted: Vec<String>,
}

fn num<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    s.parse::<T>().map_err(|e| format!("'{s}': {e}"))
}

impl ExperimentConfig {
    /// Value of `key` in the canonical text form.
    pub fn get(&self, key: &str) -> Option<String> {
        let r = &self.scan_region;
        Some(match key {
            "experiment" => self.experiment.to_string(),
            "metric" => self.metric.to_string(),
            "initial" => self.initial.to_string(),
            "half_length" => self.half_length.to_string(),
            "n" => self.n.to_string(),
            "dt" => self.dt.to_string(),
            "t_end" => self.t_end.to_string(),
            "stride" => self.stride.to_string(),
            "integrator" => integrator_name(self.integrator).into(),
            "dealias" => self.dealias.to_string(),
            "chart_radius" => self.chart_radius.to_string(),
            "boundary_tol" => self.boundary_tol.to_string(),
            "fit_t0" => self.fit_t0.to_string(),
            "psi" => self.psi.to_string(),
            "correction" => correction_name(self.correction).into(),
            "ablate" => ablation_string(&self.ablate),
            "m" => self.m.to_string(),
            "eps_star" => self.eps_star.to_string(),
            "residual_t0" => self.residual_t0.to_string(),
            "residual_t1" => self.residual_t1.to_string(),
            "residual_samples" => self.residual_samples.to_string(),
            "n_final" => self.n_final.to_string(),
            "n0" => self.n0.to_string(),
            "wave_samples" => self.wave_samples.to_string(),
            "wave_dt" => self.wave_dt.to_string(),
            "wave_half_length" => self.wave_half_length.to_string(),
            "wave_n" => self.wave_n.to_string(),
            "scan_region" => format!("{},{},{},{}", r.x0, r.x1, r.y0, r.y1),
            "scan_resolution" => self.scan_resolution.to_string(),
            "out_dir" => self.out_dir.display().to_string(),
            "seed" => self.seed.to_string(),
            "quick" => self.quick.to_string(),
            _ => return None,
        })
    }

    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "experiment" => self.experiment = value.parse()?,
            "metric" => self.metric = value.parse::<CatalogMetric>().map_err(|e| e.to_string())?,
            "initial" => self.initial = value.parse()?,
            "half_length" => self.half_length = num(value)?,
            "n" => self.n = num(value)?,
            "dt" => self.dt = num(value)?,
            "t_end" => self.t_end = num(value)?,
            "stride" => self.stride = num(value)?,
            "integrator" => self.integrator = parse_integrator(value)?,
            "dealias" => self.dealias = num(value)?,
            "chart_radius" => self.chart_radius = num(value)?,
            "boundary_tol" => self.boundary_tol = num(value)?,
            "fit_t0" => self.fit_t0 = num(value)?,
            "psi" => self.psi = value.parse()?,
            "correction" => self.correction = parse_correction(value)?,
            "ablate" => self.ablate = parse_ablation(value)?,
            "m" => self.m = num(value)?,
            "eps_star" => self.eps_star = num(value)?,
            "residual_t0" => self.residual_t0 = num(value)?,
            "residual_t1" => self.residual_t1 = num(value)?,
            "residual_samples" => self.residual_samples = num(value)?,
            "n_final" => self.n_final = num(value)?,
            "n0" => self.n0 = num(value)?,
            "wave_samples" => self.wave_samples = num(value)?,
            "wave_dt" => self.wave_dt = num(value)?,
            "wave_half_length" => self.wave_half_length = num(value)?,
            "wave_n" => self.wave_n = num(value)?,
            "scan_region" => {
                let p = numbers(value, 4, "scan_region x0,x1,y0,y1")?;
                self.scan_region = Rect { x0: p[0], x1: p[1], y0: p[2], y1: p[3] };
            }
            "scan_resolution" => self.scan_resolution = num(value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "seed" => self.seed = num(value)?,
            "quick" => self.quick = parse_bool(value)?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Range checks; returns the offending key and message.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        fn pos(key: &'static str, v: f64) -> Result<(), (&'static str, String)> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err((key, format!("must be positive and finite, got {v}")))
            }
        }
        fn pow2(key: &'static str, n: usize) -> Result<(), (&'static str, String)> {
            if n >= 256 && n.is_power_of_two() {
                Ok(())
            } else {
                Err((key, format!("must be a power of two ≥ 256, got {n}")))
            }
        }
        fn spacing(key: &'static str, half_length: f64, n: usize) -> Result<(), (&'static str, String)> {
            let dx = 2.0 * half_length / n as f64;
            if dx < 1.0 {
                Ok(())
            } else {
                Err((key, format!("grid spacing 2·half_length/n = {dx} must be below 1")))
            }
        }
        pos("half_length", self.half_length)?;
        pow2("n", self.n)?;
        spacing("n", self.half_length, self.n)?;
        pos("dt", self.dt)?;
        pos("t_end", self.t_end)?;
        if self.stride == 0 {
            return Err(("stride", "must be at least 1".into()));
        }
        if !(self.dealias > 0.0 && self.dealias <= 2.0 / 3.0 + 1e-12) {
            return Err(("dealias", format!("must lie in (0, 2/3], got {}", self.dealias)));
        }
        if !(self.chart_radius > 0.0 && self.chart_radius < 1.0) {
            return Err(("chart_radius", format!("must lie in (0, 1), got {}", self.chart_radius)));
        }
        pos("boundary_tol", self.boundary_tol)?;
        if !(self.fit_t0 > 0.0 && self.fit_t0 < self.t_end) {
            return Err(("fit_t0", format!("must lie in (0, t_end), got {}", self.fit_t0)));
        }
        if self.m == 0 {
            return Err(("m", "must be at least 1".into()));
        }
        pos("eps_star", self.eps_star)?;
        if !(self.residual_t0 >= 1.0 && self.residual_t1 > self.residual_t0) {
            return Err(("residual_t1", format!("need 1 ≤ residual_t0 < residual_t1, got [{}, {}]", self.residual_t0, self.residual_t1)));
        }
        if self.residual_samples < smflow::diagnostics::MIN_FIT_ROWS {
            return Err(("residual_samples", format!("must be at least {}", smflow::diagnostics::MIN_FIT_ROWS)));
        }
        if !(self.n0 >= 10.0 && self.n_final >= 4.0 * self.n0) {
            return Err(("n_final", format!("need n_final ≥ 4·n0 and n0 ≥ 10, got n_final = {}, n0 = {}", self.n_final, self.n0)));
        }
        if self.wave_samples < smflow::diagnostics::MIN_FIT_ROWS {
            return Err(("wave_samples", format!("must be at least {}", smflow::diagnostics::MIN_FIT_ROWS)));
        }
        pos("wave_dt", self.wave_dt)?;
        pos("wave_half_length", self.wave_half_length)?;
        pow2("wave_n", self.wave_n)?;
        spacing("wave_n", self.wave_half_length, self.wave_n)?;
        let r = &self.scan_region;
        if !(r.x1 > r.x0 && r.y1 > r.y0) {
            return Err(("scan_region", "needs x0 < x1 and y0 < y1".into()));
        }
        if self.scan_resolution < 2 {
            return Err(("scan_resolution", "must be at least 2".into()));
        }
        Ok(())
    }

    /// Canonical text form: one `key=value` line per key.
    pub fn serialize(&self) -> String {
        KEYS.iter().map(|k| format!("{k}={}\n", self.get(k).expect("every key serialises"))).collect()
    }

    /// Canonical (key, value) pairs.
    pub fn echo(&self) -> BTreeMap<String, String> {
        KEYS.iter().map(|k| (k.to_string(), self.get(k).unwrap())).collect()
    }
}

fn apply(pairs: Vec<(Location, String, String)>) -> Result<ParsedConfig, ParseError> {
    let mut cfg = ExperimentConfig::default();
    let mut seen: BTreeMap<String, Location> = BTreeMap::new();
    for (loc, key, value) in pairs {
        if !KEYS.contains(&key.as_str()) {
            return Err(ParseError::at(loc, format!("unknown key '{key}'")));
        }
        if let Some(first) = seen.get(&key) {
            return Err(ParseError::at(loc, format!("duplicate key '{key}' (first set at {first})")));
        }
        cfg.set(&key, &value).map_err(|m| ParseError::at(loc.clone(), format!("{key}: {m}")))?;
        seen.insert(key, loc);
    }
    if let Err((key, msg)) = cfg.validate() {
        let loc = seen.get(key).cloned().unwrap_or(Location::Default);
        return Err(ParseError::at(loc, format!("{key}: {msg}")));
    }
    let defaulted = KEYS.iter().filter(|k| !seen.contains_key(**k)).map(|k| k.to_string()).collect();
    Ok(ParsedConfig { config: cfg, defaulted })
}

fn tokenize(text: &str) -> Result<Vec<(Location, String, String)>, ParseError> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for token in body.split_whitespace() {
            let loc = Location::Line(i + 1);
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| ParseError::at(loc.clone(), format!("expected key=value, found '{token}'")))?;
            if k.is_empty() || v.is_empty() {
                return Err(ParseError::at(loc, format!("empty key or value in '{token}'")));
            }
            pairs.push((loc, k.to_string(), v.to_string()));
        }
    }
    Ok(pairs)
}

/// Parses configuration text.
pub fn parse_config_str(text: &str) -> Result<ParsedConfig, ParseError> {
    apply(tokenize(text)?)
}

/// Parses a configuration file, then applies command-line overrides in order.
pub fn parse_config(path: Option<&Path>, flags: &[(String, String)]) -> Result<ParsedConfig, ParseError> {
    let mut pairs = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| ParseError::at(Location::File, format!("cannot read {}: {e}", p.display())))?;
            tokenize(&text).map_err(|e| ParseError::at(e.location, format!("{}: {}", p.display(), e.message)))?
        }
        None => Vec::new(),
    };
    for (k, v) in flags {
        pairs.retain(|(loc, key, _)| !(key == k && matches!(loc, Location::Line(_))));
        pairs.push((Location::Flag(k.clone()), k.clone(), v.clone()));
    }
    apply(pairs).map_err(|e| match (&e.location, path) {
        (Location::Line(_) | Location::Default, Some(p)) if !e.message.starts_with(&p.display().to_string()) => {
            ParseError::at(e.location, format!("{}: {}", p.display(), e.message))
        }
        _ => e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let p = parse_config_str("experiment=analyze-metric metric=sphere").unwrap();
        assert_eq!(p.config.experiment, ExperimentKind::AnalyzeMetric);
        assert_eq!(p.config.metric, CatalogMetric::Sphere);
        assert_eq!(p.defaulted.len(), KEYS.len() - 2);
        assert!(!p.defaulted.iter().any(|k| k == "metric"));
    }

    #[test]
    fn bad_metric_is_named() {
        let e = parse_config_str("experiment=analyze-metric\nmetric=torus").unwrap_err();
        assert_eq!(e.location, Location::Line(2));
        assert!(e.message.contains("torus"), "{e}");
    }

    #[test]
    fn unknown_and_duplicate_keys_are_errors() {
        assert!(parse_config_str("colour=blue").unwrap_err().message.contains("unknown key 'colour'"));
        let e = parse_config_str("dt=0.1\n# comment\ndt=0.2").unwrap_err();
        assert_eq!(e.location, Location::Line(3));
        assert!(parse_config_str("dt").is_err());
    }

    #[test]
    fn range_violations_cite_the_key() {
        let e = parse_config_str("n=1000").unwrap_err();
        assert!(e.message.starts_with("n:"), "{e}");
        assert!(parse_config_str("n0=10 n_final=20").is_err());
        assert!(parse_config_str("dealias=0.9").is_err());
    }

    #[test]
    fn round_trip_is_lossless() {
        let text = "experiment=final-state metric=remark11:0.5,0,0,0.25 psi=gaussian:0.7,3e-5 ablate=v2,tail dt=0.1 quick=true scan_region=-1,1,-0.5,0.5";
        let a = parse_config_str(text).unwrap().config;
        let b = parse_config_str(&a.serialize()).unwrap();
        assert_eq!(a, b.config);
        assert!(b.defaulted.is_empty());
        assert_eq!(a.serialize(), b.config.serialize());
    }

    #[test]
    fn flags_override_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "experiment=simulate\nmetric=flat\nt_end=5\n").unwrap();
        let e = parse_config(Some(&path), &[]).unwrap_err();
        assert_eq!(e.location, Location::Default);
        assert!(e.message.contains("fit_t0") && e.message.contains("run.cfg"), "{e}");
        let p = parse_config(Some(&path), &[("metric".into(), "sphere".into()), ("fit_t0".into(), "1".into())]).unwrap();
        assert_eq!(p.config.metric, CatalogMetric::Sphere);
        assert_eq!(p.config.t_end, 5.0);
        let e = parse_config(Some(&path), &[("metric".into(), "nope".into())]).unwrap_err();
        assert_eq!(e.location, Location::Flag("metric".into()));
    }
}
