use super::grid::{GridSpec, Spectral};
use super::state::FieldState;
use crate::error::{Result, SmfError};
use crate::metric::{CatalogMetric, MetricKind, MetricSpec, DEFAULT_CHART_RADIUS};
use crate::par::{self, Execution};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Integrating factor e^{−iξ²τ} with classical RK4 on the transformed nonlinearity.
    Ifrk4,
    /// Exact linear half steps around an RK4 nonlinear step.
    Strang,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub integrator: Integrator,
    pub dealias_fraction: f64,
    pub diag_stride: usize,
    pub direction: Direction,
    pub chart_radius: f64,
    pub boundary_tol: f64,
    pub exec: Execution,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: 1e-2,
            integrator: Integrator::Ifrk4,
            dealias_fraction: 2.0 / 3.0,
            diag_stride: 100,
            direction: Direction::Forward,
            chart_radius: DEFAULT_CHART_RADIUS,
            boundary_tol: 1e-8,
            exec: Execution::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SmfError::InvalidInput(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 2.0 / 3.0 + 1e-12) {
            return Err(SmfError::InvalidInput(format!("dealias fraction must lie in (0, 2/3], got {}", self.dealias_fraction)));
        }
        if self.diag_stride == 0 {
            return Err(SmfError::InvalidInput("diag_stride must be at least 1".into()));
        }
        Ok(())
    }

    fn signed_dt(&self) -> f64 {
        match self.direction {
            Direction::Forward => self.dt,
            Direction::Backward => -self.dt,
        }
    }
}

/// Right-hand side model, written as i∂ₜz + Δz = G(z)(∂ₓz)².
#[derive(Debug, Clone)]
pub enum Nonlinearity {
    /// G = −∂_z ln h evaluated exactly.
    Metric(MetricSpec),
    /// G = −(c0 + c1 z̄ + c2 z + c3 z² + c4 z̄² + c5 z z̄).
    Truncated([C64; 6]),
    /// G = μ₁ z̄ + μ₂ |z|² + μ₃ z̄².
    Reduced([C64; 3]),
}

impl Nonlinearity {
    pub fn coefficient(&self, z: C64) -> C64 {
        match self {
            Nonlinearity::Metric(m) => -m.dlog_h(z),
            Nonlinearity::Truncated(c) => {
                let zc = z.conj();
                -(c[0] + c[1] * zc + c[2] * z + c[3] * z * z + c[4] * zc * zc + c[5] * z * zc)
            }
            Nonlinearity::Reduced(m) => {
                let zc = z.conj();
                m[0] * zc + m[1] * z * zc + m[2] * zc * zc
            }
        }
    }

    /// True when G ≡ 0, in which case the step is the exact free propagator.
    pub fn is_zero(&self) -> bool {
        match self {
            Nonlinearity::Metric(m) => matches!(m.kind, MetricKind::Catalog(CatalogMetric::Flat)),
            Nonlinearity::Truncated(c) => c.iter().all(|v| *v == C64::new(0.0, 0.0)),
            Nonlinearity::Reduced(m) => m.iter().all(|v| *v == C64::new(0.0, 0.0)),
        }
    }
}

fn chart_guard(z: &[C64], radius: f64, t: f64) -> Result<()> {
    let mut m: f64 = 0.0;
    for v in z {
        let a = v.norm();
        if !a.is_finite() {
            return Err(SmfError::NaNDetected { t, suggested_dt: f64::NAN });
        }
        m = m.max(a);
    }
    if m >= radius {
        return Err(SmfError::ChartExit { t, max_modulus: m, radius });
    }
    Ok(())
}

/// F(z) with ∂ₜz = iΔz + F(z), i.e. F = −i·G(z)·(∂ₓz)², computed spectrally and dealiased.
pub fn nonlinear_rhs(state: &FieldState, nl: &Nonlinearity, config: &SolverConfig) -> Result<Vec<C64>> {
    let solver = Solver::new(state.grid, *config, nl.clone())?;
    chart_guard(&state.z, config.chart_radius, state.t)?;
    let zhat = solver.spectral.to_fourier(&state.z);
    let nhat = solver.rhs_hat(&zhat, state.t)?;
    Ok(solver.spectral.to_physical(&nhat))
}

/// Pseudo-spectral integrator for one grid, configuration and right-hand side.
#[derive(Debug, Clone)]
pub struct Solver {
    spectral: Spectral,
    config: SolverConfig,
    nl: Nonlinearity,
    mask: Vec<f64>,
    xi2: Vec<f64>,
}

impl Solver {
    pub fn new(grid: GridSpec, config: SolverConfig, nl: Nonlinearity) -> Result<Self> {
        config.validate()?;
        let spectral = Spectral::new(grid);
        let mask = spectral.dealias_mask(config.dealias_fraction);
        let xi2 = spectral.xi().iter().map(|x| x * x).collect();
        Ok(Solver { spectral, config, nl, mask, xi2 })
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nl
    }

    /// F̂ for Fourier data ẑ.
    fn rhs_hat(&self, zhat: &[C64], t: f64) -> Result<Vec<C64>> {
        let n = zhat.len();
        if self.nl.is_zero() {
            return Ok(vec![C64::new(0.0, 0.0); n]);
        }
        let z = self.spectral.to_physical(zhat);
        chart_guard(&z, self.config.chart_radius, t)?;
        let zx = self.spectral.derivative_of_hat(zhat);
        let mut f = vec![C64::new(0.0, 0.0); n];
        let nl = &self.nl;
        par::fill(self.config.exec, &mut f, |j| C64::new(0.0, -1.0) * nl.coefficient(z[j]) * zx[j] * zx[j]);
        self.spectral.forward(&mut f);
        for (v, m) in f.iter_mut().zip(&self.mask) {
            *v *= m;
        }
        Ok(f)
    }

    /// ∂ₜz = iΔz + F(z) at the given state.
    pub fn time_derivative(&self, state: &FieldState) -> Result<Vec<C64>> {
        let zhat = self.spectral.to_fourier(&state.z);
        let f = self.rhs_hat(&zhat, state.t)?;
        let out: Vec<C64> =
            zhat.iter().zip(&f).zip(&self.xi2).map(|((a, b), &x2)| C64::new(0.0, -x2) * a + b).collect();
        Ok(self.spectral.to_physical(&out))
    }

    fn propagate(&self, u: &[C64], tau: f64) -> Vec<C64> {
        u.iter().zip(&self.xi2).map(|(a, &x2)| a * C64::from_polar(1.0, -x2 * tau)).collect()
    }

    fn axpy(a: &[C64], s: f64, b: &[C64]) -> Vec<C64> {
        a.iter().zip(b).map(|(x, y)| x + y * s).collect()
    }

    /// Advances Fourier data by the signed step h.
    pub fn step_hat(&self, u: &[C64], t: f64, h: f64) -> Result<Vec<C64>> {
        if self.nl.is_zero() {
            return Ok(self.propagate(u, h));
        }
        match self.config.integrator {
            Integrator::Ifrk4 => {
                let k1 = self.rhs_hat(u, t)?;
                let eu = self.propagate(u, 0.5 * h);
                let a = self.propagate(&Self::axpy(u, 0.5 * h, &k1), 0.5 * h);
                let k2 = self.rhs_hat(&a, t + 0.5 * h)?;
                let b = Self::axpy(&eu, 0.5 * h, &k2);
                let k3 = self.rhs_hat(&b, t + 0.5 * h)?;
                let c = self.propagate(&Self::axpy(&eu, h, &k3), 0.5 * h);
                let k4 = self.rhs_hat(&c, t + h)?;
                let e_full = self.propagate(u, h);
                let e_k1 = self.propagate(&k1, h);
                let k23: Vec<C64> = k2.iter().zip(&k3).map(|(x, y)| x + y).collect();
                let e_k23 = self.propagate(&k23, 0.5 * h);
                Ok((0..u.len()).map(|i| e_full[i] + (e_k1[i] + 2.0 * e_k23[i] + k4[i]) * (h / 6.0)).collect())
            }
            Integrator::Strang => {
                let v = self.propagate(u, 0.5 * h);
                let tm = t + 0.5 * h;
                let k1 = self.rhs_hat(&v, tm)?;
                let k2 = self.rhs_hat(&Self::axpy(&v, 0.5 * h, &k1), tm)?;
                let k3 = self.rhs_hat(&Self::axpy(&v, 0.5 * h, &k2), tm)?;
                let k4 = self.rhs_hat(&Self::axpy(&v, h, &k3), tm)?;
                let w: Vec<C64> =
                    (0..v.len()).map(|i| v[i] + (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) * (h / 6.0)).collect();
                Ok(self.propagate(&w, 0.5 * h))
            }
        }
    }

    /// One step of size ±dt according to the configured direction.
    pub fn step(&self, state: &FieldState) -> Result<FieldState> {
        let h = self.config.signed_dt();
        let uhat = self.spectral.to_fourier(&state.z);
        let next = self.step_hat(&uhat, state.t, h)?;
        let out = FieldState::new(state.t + h, state.grid, self.spectral.to_physical(&next));
        if out.has_non_finite() {
            return Err(SmfError::NaNDetected { t: out.t, suggested_dt: 0.5 * self.config.dt });
        }
        Ok(out)
    }

    /// Integrates to `t_end`, calling `sink` on the initial state, every `diag_stride` steps
    /// and on the final state. Time stamps are t₀ + k·dt (no accumulation drift); the last
    /// step is shortened to land exactly on `t_end`.
    pub fn evolve(
        &self,
        state: &FieldState,
        t_end: f64,
        sink: &mut dyn FnMut(&FieldState) -> Result<()>,
    ) -> Result<FieldState> {
        let span = t_end - state.t;
        if span == 0.0 {
            return Err(SmfError::InvalidInput("t_end equals the current time".into()));
        }
        let sign = span.signum();
        let expected = match self.config.direction {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        };
        if sign != expected {
            return Err(SmfError::InvalidInput(format!(
                "t_end = {t_end} is not reachable from t = {} in direction {:?}",
                state.t, self.config.direction
            )));
        }
        let dt = self.config.dt;
        let full = (span.abs() / dt * (1.0 - 1e-12)).floor() as usize;
        let rem = span.abs() - full as f64 * dt;
        let nsteps = if rem > 1e-12 * dt { full + 1 } else { full };
        let t0 = state.t;

        sink(state)?;
        let mut uhat = self.spectral.to_fourier(&state.z);
        let mut t = t0;
        let mut last = state.clone();
        for k in 1..=nsteps {
            let t_next = if k == nsteps { t_end } else { t0 + sign * k as f64 * dt };
            uhat = self.step_hat(&uhat, t, t_next - t)?;
            t = t_next;
            if uhat.iter().any(|v| !v.is_finite()) {
                return Err(SmfError::NaNDetected { t, suggested_dt: 0.5 * dt });
            }
            if k % self.config.diag_stride == 0 || k == nsteps {
                last = FieldState::new(t, state.grid, self.spectral.to_physical(&uhat));
                chart_guard(&last.z, self.config.chart_radius, t)?;
                let frac = last.boundary_mass_fraction();
                if frac > self.config.boundary_tol {
                    return Err(SmfError::BoundaryMass { t, fraction: frac, tolerance: self.config.boundary_tol });
                }
                sink(&last)?;
            }
        }
        Ok(last)
    }
}

/// Evolves the truncated normal-form model i∂ₜw + Δw = (μ₁w̄ + μ₂|w|² + μ₃w̄²)(∂ₓw)².
pub fn evolve_reduced(
    state: &FieldState,
    t_end: f64,
    config: &SolverConfig,
    mu: [C64; 3],
    sink: &mut dyn FnMut(&FieldState) -> Result<()>,
) -> Result<FieldState> {
    Solver::new(state.grid, *config, Nonlinearity::Reduced(mu))?.evolve(state, t_end, sink)
}

/// Evolves the chart equation for `metric`.
pub fn evolve(
    state: &FieldState,
    t_end: f64,
    config: &SolverConfig,
    metric: &MetricSpec,
    sink: &mut dyn FnMut(&FieldState) -> Result<()>,
) -> Result<FieldState> {
    Solver::new(state.grid, *config, Nonlinearity::Metric(metric.clone()))?.evolve(state, t_end, sink)
}

/// Exact free propagator e^{itΔ} applied spectrally.
pub fn free_evolution(state: &FieldState, t: f64) -> FieldState {
    let sp = Spectral::new(state.grid);
    let tau = t - state.t;
    let mut u = sp.to_fourier(&state.z);
    for (a, &x) in u.iter_mut().zip(sp.xi()) {
        *a *= C64::from_polar(1.0, -x * x * tau);
    }
    FieldState::new(t, state.grid, sp.to_physical(&u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::InitialData;

    fn grid() -> GridSpec {
        GridSpec::new(32.0, 512).unwrap()
    }

    #[test]
    fn rhs_trivial_cases() {
        let cfg = SolverConfig::default();
        let zero = FieldState::zeros(0.0, grid());
        let r = nonlinear_rhs(&zero, &Nonlinearity::Metric(MetricSpec::catalog(CatalogMetric::Sphere)), &cfg).unwrap();
        assert!(r.iter().all(|v| v.norm() == 0.0));
        let s = InitialData::Gaussian { epsilon: 0.1, sigma0: 1.0 }.sample(grid(), 0.0);
        let r = nonlinear_rhs(&s, &Nonlinearity::Metric(MetricSpec::catalog(CatalogMetric::Flat)), &cfg).unwrap();
        assert!(r.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn rhs_single_mode_exp_linear() {
        // ∂ₜz = iΔz + i(h_z/h)(∂ₓz)² with h_z/h ≡ 1: F = i(iξ₀ε)²e^{2iξ₀x} = −iξ₀²ε²e^{2iξ₀x}
        let g = grid();
        let xi0 = g.wavenumber(10);
        let eps = 0.05;
        let s = FieldState::new(0.0, g, g.xs().iter().map(|&x| C64::from_polar(eps, xi0 * x)).collect());
        let r = nonlinear_rhs(&s, &Nonlinearity::Metric(MetricSpec::catalog(CatalogMetric::ExpLinear)), &SolverConfig::default())
            .unwrap();
        for (j, &x) in g.xs().iter().enumerate() {
            let want = C64::new(0.0, -xi0 * xi0 * eps * eps) * C64::from_polar(1.0, 2.0 * xi0 * x);
            assert!((r[j] - want).norm() < 1e-15, "{j}: {} vs {want}", r[j]);
        }
    }

    #[test]
    fn chart_exit_reported() {
        let s = InitialData::Gaussian { epsilon: 0.5, sigma0: 1.0 }.sample(grid(), 0.0);
        let e = nonlinear_rhs(&s, &Nonlinearity::Metric(MetricSpec::catalog(CatalogMetric::Sphere)), &SolverConfig::default());
        assert!(matches!(e, Err(SmfError::ChartExit { .. })));
    }

    #[test]
    fn flat_step_is_free_propagator() {
        let s = InitialData::Gaussian { epsilon: 0.05, sigma0: 1.0 }.sample(grid(), 0.0);
        let cfg = SolverConfig { dt: 0.1, ..Default::default() };
        let solver = Solver::new(grid(), cfg, Nonlinearity::Metric(MetricSpec::catalog(CatalogMetric::Flat))).unwrap();
        let one = solver.step(&s).unwrap();
        let free = free_evolution(&s, 0.1);
        // exact solution of the Gaussian free flow
        let tt = 0.1;
        for (j, &x) in grid().xs().iter().enumerate() {
            let d = C64::new(1.0, 2.0 * tt);
            let exact = 0.05 / d.sqrt() * (-(x * x) / (2.0 * d)).exp();
            assert!((one.z[j] - exact).norm() < 1e-12);
            assert!((one.z[j] - free.z[j]).norm() < 1e-15);
        }
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig { dt: 0.0, ..Default::default() }.validate().is_err());
        assert!(SolverConfig { dealias_fraction: 0.9, ..Default::default() }.validate().is_err());
        let s = FieldState::zeros(1.0, grid());
        let solver = Solver::new(grid(), SolverConfig::default(), Nonlinearity::Reduced([C64::new(0.0, 0.0); 3])).unwrap();
        assert!(solver.evolve(&s, 0.0, &mut |_| Ok(())).is_err());
    }

    #[test]
    fn evolve_lands_on_end_time() {
        let s = InitialData::Gaussian { epsilon: 0.01, sigma0: 1.0 }.sample(grid(), 0.0);
        let cfg = SolverConfig { dt: 0.03, diag_stride: 7, ..Default::default() };
        let mut times = Vec::new();
        let end = evolve(&s, 1.0, &cfg, &MetricSpec::catalog(CatalogMetric::Sphere), &mut |st| {
            times.push(st.t);
            Ok(())
        })
        .unwrap();
        assert_eq!(end.t, 1.0);
        assert_eq!(*times.last().unwrap(), 1.0);
        assert!(times.windows(2).all(|w| w[1] > w[0]));
    }
}
