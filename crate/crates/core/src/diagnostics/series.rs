use super::fit::{power_law_fit, FitResult};
use super::functionals::{apply_l, apply_s, energy, l2, l_functional, linf, mass_functional, w2inf};
use super::profile::{default_sigmas, fourier_profile, profile_at, PhaseAccumulator, DEFAULT_PHASE_TOL};
use crate::error::{Result, SmfError};
use crate::metric::{forward_transform_with, MetricSpec, NormalFormCoefficients};
use crate::spectral::{FieldState, Nonlinearity, Solver};
use num_complex::Complex64 as C64;
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    Linf,
    W2Inf,
    H1,
    H2,
    H3,
    Energy,
    Mass,
    LFunctional,
    LwL2,
    SzWeighted,
    BoundaryMass,
    WW1Inf,
}

impl Column {
    pub const ALL: [Column; 12] = [
        Column::Linf,
        Column::W2Inf,
        Column::H1,
        Column::H2,
        Column::H3,
        Column::Energy,
        Column::Mass,
        Column::LFunctional,
        Column::LwL2,
        Column::SzWeighted,
        Column::BoundaryMass,
        Column::WW1Inf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::Linf => "linf",
            Column::W2Inf => "w2inf",
            Column::H1 => "h1",
            Column::H2 => "h2",
            Column::H3 => "h3",
            Column::Energy => "energy",
            Column::Mass => "mass",
            Column::LFunctional => "l_functional",
            Column::LwL2 => "lw_l2",
            Column::SzWeighted => "sz_weighted",
            Column::BoundaryMass => "boundary_mass",
            Column::WW1Inf => "w_w1inf",
        }
    }
}

impl FromStr for Column {
    type Err = SmfError;
    fn from_str(s: &str) -> Result<Self> {
        Column::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| SmfError::InvalidInput(format!("unknown column '{s}'")))
    }
}

/// One diagnostic time. Norms of z except `mass`, `l_functional`, `lw_l2` and `w_w1inf`,
/// which are evaluated on the normal-form variable w.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRow {
    pub t: f64,
    pub linf: f64,
    pub w2inf: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub energy: f64,
    pub mass: f64,
    pub l_functional: f64,
    pub lw_l2: f64,
    pub sz_weighted: f64,
    pub boundary_mass: f64,
    pub w_w1inf: f64,
}

impl DiagnosticRow {
    pub fn get(&self, c: Column) -> f64 {
        match c {
            Column::Linf => self.linf,
            Column::W2Inf => self.w2inf,
            Column::H1 => self.h1,
            Column::H2 => self.h2,
            Column::H3 => self.h3,
            Column::Energy => self.energy,
            Column::Mass => self.mass,
            Column::LFunctional => self.l_functional,
            Column::LwL2 => self.lw_l2,
            Column::SzWeighted => self.sz_weighted,
            Column::BoundaryMass => self.boundary_mass,
            Column::WW1Inf => self.w_w1inf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedSample {
    pub f_hat: C64,
    pub phi: f64,
    pub big_f: C64,
}

#[derive(Debug, Clone, Default)]
pub struct DiagnosticSeries {
    pub t0: f64,
    pub rows: Vec<DiagnosticRow>,
    pub sigmas: Vec<f64>,
    /// `tracked[row][k]` belongs to `sigmas[k]`.
    pub tracked: Vec<Vec<TrackedSample>>,
    pub c_phase: f64,
}

impl DiagnosticSeries {
    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn column(&self, c: Column) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.t, r.get(c))).collect()
    }

    /// Row whose time is closest to t.
    pub fn row_near(&self, t: f64) -> Option<usize> {
        (0..self.rows.len()).min_by(|&a, &b| {
            (self.rows[a].t - t).abs().partial_cmp(&(self.rows[b].t - t).abs()).unwrap()
        })
    }

    /// History (t, f̂) of tracked frequency k.
    pub fn history(&self, k: usize) -> Vec<(f64, C64)> {
        self.rows.iter().zip(&self.tracked).map(|(r, s)| (r.t, s[k].f_hat)).collect()
    }

    fn push(&mut self, row: DiagnosticRow, tracked: Vec<TrackedSample>) -> Result<()> {
        if let Some(last) = self.rows.last() {
            if !((row.t - self.t0).abs() > (last.t - self.t0).abs()) {
                return Err(SmfError::InvalidInput(format!("row at t = {} does not advance past t = {}", row.t, last.t)));
            }
        } else {
            self.t0 = row.t;
        }
        self.rows.push(row);
        self.tracked.push(tracked);
        Ok(())
    }

    /// CSV with header `t,linf,w2inf,h1,h2,h3,energy,mass,l_functional,lw_l2,sz_weighted,boundary_mass,w_w1inf`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for c in Column::ALL {
            s.push(',');
            s.push_str(c.name());
        }
        s.push('\n');
        for r in &self.rows {
            write!(s, "{:e}", r.t).unwrap();
            for c in Column::ALL {
                write!(s, ",{:e}", r.get(c)).unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// CSV keyed by (t, σ) with header `t,sigma,fhat_re,fhat_im,phi,Fhat_re,Fhat_im`.
    pub fn frequency_csv(&self) -> String {
        let mut s = String::from("t,sigma,fhat_re,fhat_im,phi,Fhat_re,Fhat_im\n");
        for (r, samples) in self.rows.iter().zip(&self.tracked) {
            for (sigma, v) in self.sigmas.iter().zip(samples) {
                writeln!(
                    s,
                    "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                    r.t, sigma, v.f_hat.re, v.f_hat.im, v.phi, v.big_f.re, v.big_f.im
                )
                .unwrap();
            }
        }
        s
    }
}

pub fn decay_fit(series: &DiagnosticSeries, column: Column, window: (f64, f64)) -> Result<FitResult> {
    power_law_fit(&series.column(column), window)
}

#[derive(Debug, Clone)]
pub struct RecorderConfig {
    pub sigmas: Vec<f64>,
    /// Phase constant c of F̂ = e^{icΦ}f̂.
    pub c_phase: f64,
    /// Weight μ₁ of 𝓗 and 𝓛.
    pub mu1: f64,
    /// Normal-form coefficients of w = z + γ₁z² + γ₂z³ + γ₃z⁴.
    pub gamma: [C64; 3],
    pub phase_tol: f64,
    /// Keep the full-grid profile f̂ of the latest row.
    pub keep_profile: bool,
}

impl RecorderConfig {
    pub fn from_normal_form(nf: &NormalFormCoefficients) -> Self {
        RecorderConfig {
            sigmas: default_sigmas(),
            c_phase: nf.c_phase,
            mu1: nf.flow_nu()[0].re,
            gamma: nf.gamma,
            phase_tol: DEFAULT_PHASE_TOL,
            keep_profile: true,
        }
    }

    /// Reduced model runs: z is already the normal-form variable.
    pub fn for_reduced(mu: [C64; 3]) -> Self {
        RecorderConfig {
            sigmas: default_sigmas(),
            c_phase: -mu[0].re,
            mu1: mu[0].re,
            gamma: [C64::new(0.0, 0.0); 3],
            phase_tol: DEFAULT_PHASE_TOL,
            keep_profile: true,
        }
    }
}

/// Single-writer sink that turns states into [`DiagnosticRow`]s and tracked profiles.
#[derive(Debug)]
pub struct Recorder<'a> {
    solver: &'a Solver,
    cfg: RecorderConfig,
    acc: Vec<PhaseAccumulator>,
    series: DiagnosticSeries,
    profile: Option<FieldState>,
}

impl<'a> Recorder<'a> {
    pub fn new(solver: &'a Solver, cfg: RecorderConfig) -> Self {
        let acc = cfg.sigmas.iter().map(|&s| PhaseAccumulator::new(s, cfg.c_phase, cfg.phase_tol)).collect();
        let series = DiagnosticSeries { sigmas: cfg.sigmas.clone(), c_phase: cfg.c_phase, ..Default::default() };
        Recorder { solver, cfg, acc, series, profile: None }
    }

    pub fn record(&mut self, state: &FieldState) -> Result<()> {
        let sp = self.solver.spectral();
        let exec = self.solver.config().exec;
        let radius = self.solver.config().chart_radius;
        let w = state.with_samples(forward_transform_with(exec, &state.z, &self.cfg.gamma));
        let zh = sp.to_fourier(&state.z);
        let flat = MetricSpec::catalog(crate::metric::CatalogMetric::Flat);
        let metric = match self.solver.nonlinearity() {
            Nonlinearity::Metric(m) => m,
            _ => &flat,
        };
        let wx = sp.derivative(&w.z);
        let row = DiagnosticRow {
            t: state.t,
            linf: linf(&state.z),
            w2inf: w2inf(sp, &state.z),
            h1: sp.sobolev_of_hat(&zh, 1),
            h2: sp.sobolev_of_hat(&zh, 2),
            h3: sp.sobolev_of_hat(&zh, 3),
            energy: energy(sp, state, metric),
            mass: mass_functional(&w, self.cfg.mu1, radius)?,
            l_functional: l_functional(sp, &w, self.cfg.mu1),
            lw_l2: l2(&apply_l(sp, &w), state.grid.dx()),
            sz_weighted: apply_s(self.solver, state)?.1,
            boundary_mass: state.boundary_mass_fraction(),
            w_w1inf: linf(&w.z) + linf(&wx),
        };
        let mut tracked = Vec::with_capacity(self.acc.len());
        for acc in &mut self.acc {
            let f_hat = profile_at(&w, acc.sigma);
            let (phi, big_f) = acc.push(state.t, f_hat)?;
            tracked.push(TrackedSample { f_hat, phi, big_f });
        }
        self.series.push(row, tracked)?;
        if self.cfg.keep_profile {
            self.profile = Some(w.with_samples(fourier_profile(sp, &w)));
        }
        Ok(())
    }

    pub fn series(&self) -> &DiagnosticSeries {
        &self.series
    }

    /// Full-grid profile f̂ (FFT order) of the latest row, stored as a state stamped with its time.
    pub fn latest_profile(&self) -> Option<&FieldState> {
        self.profile.as_ref()
    }

    pub fn finish(self) -> (DiagnosticSeries, Option<FieldState>) {
        (self.series, self.profile)
    }
}

/// Runs `solver` from `z0` to `t_end` and records every diagnostic row.
pub fn record_run(
    solver: &Solver,
    z0: &FieldState,
    t_end: f64,
    cfg: RecorderConfig,
) -> Result<(DiagnosticSeries, FieldState, Option<FieldState>)> {
    let mut rec = Recorder::new(solver, cfg);
    let last = solver.evolve(z0, t_end, &mut |s| rec.record(s))?;
    let (series, profile) = rec.finish();
    Ok((series, last, profile))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::CatalogMetric;
    use crate::spectral::{GridSpec, InitialData, SolverConfig};

    #[test]
    fn flat_run_is_constant() {
        let g = GridSpec::new(64.0, 1024).unwrap();
        let spec = MetricSpec::catalog(CatalogMetric::Flat);
        let nf = NormalFormCoefficients::from_spec(&spec).unwrap();
        let cfg = SolverConfig { dt: 0.05, diag_stride: 10, ..Default::default() };
        let solver = Solver::new(g, cfg, Nonlinearity::Metric(spec)).unwrap();
        let z0 = InitialData::Gaussian { epsilon: 0.05, sigma0: 1.0 }.sample(g, 0.0);
        let (series, _, prof) = record_run(&solver, &z0, 4.0, RecorderConfig::from_normal_form(&nf)).unwrap();
        assert_eq!(series.rows.len(), 9);
        let r0 = series.rows[0];
        for (r, tr) in series.rows.iter().zip(&series.tracked) {
            assert!((r.energy - r0.energy).abs() < 1e-10 * r0.energy);
            assert!((r.mass - r0.mass).abs() < 1e-10 * r0.mass);
            assert!((r.lw_l2 - r0.lw_l2).abs() < 1e-10 * r0.lw_l2);
            for (a, b) in tr.iter().zip(&series.tracked[0]) {
                assert!((a.f_hat - b.f_hat).norm() < 1e-10);
                assert!((a.big_f.norm() - a.f_hat.norm()).abs() < 1e-15);
            }
        }
        assert_eq!(prof.unwrap().t, 4.0);
        assert!(series.to_csv().lines().count() == 10);
        assert!(series.frequency_csv().lines().count() == 1 + 9 * 16);
    }

    #[test]
    fn column_names_round_trip() {
        for c in Column::ALL {
            assert_eq!(c.name().parse::<Column>().unwrap(), c);
        }
        assert!("nope".parse::<Column>().is_err());
    }
}
