use super::profile::FinalStateProfile;
use crate::diagnostics::{l2, log_spaced, power_law_fit, FitResult};
use crate::error::{Result, SmfError};
use crate::metric::{forward_transform_with, inverse_transform, MetricSpec, NormalFormCoefficients};
use crate::spectral::{Direction, FieldState, GridSpec, Nonlinearity, Solver, SolverConfig, Spectral};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone)]
pub struct WaveOperatorConfig {
    /// Final time N where w(N) = v(N).
    pub n_final: f64,
    /// Earliest time N₀ of the backward run.
    pub n0: f64,
    pub grid: GridSpec,
    pub solver: SolverConfig,
    /// Number of log-spaced recording times in the fit window [N₀, N/4]; a third as many
    /// more cover (N/4, N].
    pub samples: usize,
}

impl WaveOperatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.n0 >= 10.0 && self.n_final >= 4.0 * self.n0) {
            return Err(SmfError::InvalidInput(format!(
                "wave-operator runs need N ≥ 4·N₀ ≥ 40, got N = {}, N₀ = {}",
                self.n_final, self.n0
            )));
        }
        if self.samples < crate::diagnostics::MIN_FIT_ROWS {
            return Err(SmfError::InvalidInput(format!(
                "at least {} recording times are needed in the fit window",
                crate::diagnostics::MIN_FIT_ROWS
            )));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        let q = self.n_final / 4.0;
        let mut t = log_spaced(self.n0, q, self.samples);
        t.extend(log_spaced(q, self.n_final, (self.samples / 3).max(2)).into_iter().skip(1));
        t
    }
}

/// Gaps ‖w(t) − v(t)‖ at the recording times, in decreasing time order.
#[derive(Debug, Clone)]
pub struct WaveOperatorRun {
    pub n_final: f64,
    pub times: Vec<f64>,
    pub gap_l2: Vec<f64>,
    pub gap_h1: Vec<f64>,
    /// w at each recording time.
    pub states: Vec<FieldState>,
    /// Power-law fit of the L² gap over [N₀, N/4].
    pub fit: Option<FitResult>,
}

fn h1(sp: &Spectral, u: &[C64]) -> f64 {
    sp.sobolev_of_hat(&sp.to_fourier(u), 1)
}

/// Sets w(N) = v(N), evolves backward to N₀ and records the gap at `times` (≤ N).
/// The full metric equation is used unless the profile ablates the tail, in which case the
/// truncated normal-form model is evolved in the w variable.
pub fn backward_run(
    profile: &FinalStateProfile,
    metric: &MetricSpec,
    nf: &NormalFormCoefficients,
    n_final: f64,
    times: &[f64],
    grid: GridSpec,
    solver: SolverConfig,
) -> Result<WaveOperatorRun> {
    let exec = solver.exec;
    let cfg = SolverConfig { direction: Direction::Backward, ..solver };
    let truncated = profile.ablation.tail;
    let gamma = if truncated { [C64::new(0.0, 0.0); 3] } else { nf.gamma };
    let nl = if truncated {
        Nonlinearity::Reduced([C64::new(profile.c, 0.0), profile.nu2, profile.nu3])
    } else {
        Nonlinearity::Metric(metric.clone())
    };
    let s = Solver::new(grid, cfg, nl)?;
    let sp = s.spectral();

    let v_end = profile.v_on_grid(n_final, &grid, exec)?;
    let mut z = FieldState::new(n_final, grid, inverse_transform(&v_end, &gamma)?);
    let frac = z.boundary_mass_fraction();
    if frac > cfg.boundary_tol {
        return Err(SmfError::BoundaryMass { t: n_final, fraction: frac, tolerance: cfg.boundary_tol });
    }
    let mut targets: Vec<f64> = times.iter().copied().filter(|&t| t <= n_final).collect();
    targets.sort_by(|a, b| b.partial_cmp(a).unwrap());
    targets.dedup();

    let mut run =
        WaveOperatorRun { n_final, times: vec![], gap_l2: vec![], gap_h1: vec![], states: vec![], fit: None };
    for &t in &targets {
        let w = if t == n_final {
            FieldState::new(t, grid, v_end.clone())
        } else {
            z = s.evolve(&z, t, &mut |_| Ok(()))?;
            z.with_samples(forward_transform_with(exec, &z.z, &gamma))
        };
        let v = profile.v_on_grid(t, &grid, exec)?;
        let d: Vec<C64> = w.z.iter().zip(&v).map(|(a, b)| a - b).collect();
        run.times.push(t);
        run.gap_l2.push(l2(&d, grid.dx()));
        run.gap_h1.push(h1(sp, &d));
        run.states.push(w);
    }
    let pts: Vec<(f64, f64)> = run.times.iter().copied().zip(run.gap_l2.iter().copied()).collect();
    let lo = targets.last().copied().unwrap_or(n_final);
    run.fit = power_law_fit(&pts, (lo, n_final / 4.0)).ok();
    Ok(run)
}

pub fn wave_operator_experiment(
    profile: &FinalStateProfile,
    metric: &MetricSpec,
    cfg: &WaveOperatorConfig,
) -> Result<WaveOperatorRun> {
    cfg.validate()?;
    let nf = NormalFormCoefficients::from_spec(metric)?;
    backward_run(profile, metric, &nf, cfg.n_final, &cfg.times(), cfg.grid, cfg.solver)
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub n: f64,
    pub n_prime: f64,
    /// sup over common recording times in [N₀, N] of ‖w_N(t) − w_{N′}(t)‖_{L²}.
    pub sup_gap: f64,
    /// sup over the same times of ‖w_N(t) − v(t)‖_{L²}.
    pub sup_gap_to_v: f64,
    /// sup_gap ≤ 2·sup_gap_to_v.
    pub within_heuristic: bool,
    pub run_n: WaveOperatorRun,
    pub run_n_prime: WaveOperatorRun,
}

/// Compares the backward runs started at N and N′ = 2N on their common window [N₀, N].
pub fn two_run_stability(profile: &FinalStateProfile, metric: &MetricSpec, cfg: &WaveOperatorConfig) -> Result<StabilityReport> {
    cfg.validate()?;
    let nf = NormalFormCoefficients::from_spec(metric)?;
    let times = cfg.times();
    let n_prime = 2.0 * cfg.n_final;
    let a = backward_run(profile, metric, &nf, cfg.n_final, &times, cfg.grid, cfg.solver)?;
    let b = backward_run(profile, metric, &nf, n_prime, &times, cfg.grid, cfg.solver)?;
    Ok(compare_runs(a, b))
}

/// Stability report for two runs that share recording times.
pub fn compare_runs(a: WaveOperatorRun, b: WaveOperatorRun) -> StabilityReport {
    let mut sup_gap: f64 = 0.0;
    let mut sup_v: f64 = 0.0;
    for (i, &t) in a.times.iter().enumerate() {
        if let Some(j) = b.times.iter().position(|&s| (s - t).abs() <= 1e-9 * t) {
            let d: Vec<C64> = a.states[i].z.iter().zip(&b.states[j].z).map(|(x, y)| x - y).collect();
            sup_gap = sup_gap.max(l2(&d, a.states[i].grid.dx()));
            sup_v = sup_v.max(a.gap_l2[i]);
        }
    }
    StabilityReport {
        n: a.n_final,
        n_prime: b.n_final,
        sup_gap,
        sup_gap_to_v: sup_v,
        within_heuristic: sup_gap <= 2.0 * sup_v,
        run_n: a,
        run_n_prime: b,
    }
}
