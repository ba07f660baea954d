use super::fit::{linear_fit, power_law_fit, FitResult};
use super::functionals::{l2, linf};
use super::profile::SampledProfile;
use crate::error::Result;
use crate::spectral::{FieldState, Solver, Spectral};
use num_complex::Complex64 as C64;

/// Leading asymptotic term (2it)^{-1/2}ψ(ξ)·exp(i x²/4t + (ic/2)|ξψ(ξ)|² ln 2t), ξ = x/2t.
pub fn main_term(x: f64, t: f64, psi: C64, c: f64) -> C64 {
    let xi = x / (2.0 * t);
    let pre = (C64::new(0.0, 2.0 * t)).sqrt().inv();
    let phase = x * x / (4.0 * t) + 0.5 * c * (xi * psi).norm_sqr() * (2.0 * t).ln();
    pre * psi * C64::from_polar(1.0, phase)
}

/// (L∞ gap, L² gap) between the state and the main term built from ψ.
pub fn asymptotic_compare(state: &FieldState, psi: &dyn Fn(f64) -> C64, c: f64) -> (f64, f64) {
    let t = state.t;
    let gap: Vec<C64> = state
        .z
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let x = state.grid.x(j);
            z - main_term(x, t, psi(x / (2.0 * t)), c)
        })
        .collect();
    (linf(&gap), l2(&gap, state.grid.dx()))
}

/// ψ(ξ) = f̂(T,ξ)·e^{-(ic/2)|ξf̂|² ln 2T}, so the main term reproduces f̂ at the extraction time.
/// `profile` holds f̂ in FFT order stamped with T.
pub fn extract_psi(sp: &Spectral, profile: &FieldState, c: f64) -> SampledProfile {
    let l = (2.0 * profile.t).ln();
    let data: Vec<C64> = profile
        .z
        .iter()
        .zip(sp.xi())
        .map(|(f, &xi)| f * C64::from_polar(1.0, -0.5 * c * (xi * f).norm_sqr() * l))
        .collect();
    SampledProfile::from_fft_order(sp, &data)
}

/// GrowthClass long-time behaviour of an observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    Zero,
    MonotoneIncreasing,
    Saturating,
}

impl GrowthClass {
    pub fn as_str(self) -> &'static str {
        match self {
            GrowthClass::Zero => "zero",
            GrowthClass::MonotoneIncreasing => "monotone-increasing",
            GrowthClass::Saturating => "saturating",
        }
    }
}

/// Relative growth over the second half of the run (in ln t) above which an observable is
/// called increasing.
pub const GROWTH_THRESHOLD: f64 = 0.01;

pub fn classify(values: &[(f64, f64)]) -> GrowthClass {
    if values.iter().all(|(_, v)| *v == 0.0) {
        return GrowthClass::Zero;
    }
    let (t_first, t_last) = (values[0].0.max(1e-300), values[values.len() - 1].0);
    let mid = (t_first.ln() + t_last.ln()) / 2.0;
    let tail: Vec<f64> = values.iter().filter(|(t, _)| t.ln() >= mid).map(|(_, v)| *v).collect();
    if tail.len() < 2 {
        return GrowthClass::Saturating;
    }
    let monotone = tail.windows(2).all(|p| p[1] >= p[0]);
    let growth = (tail[tail.len() - 1] - tail[0]) / tail[0].abs().max(1e-300);
    if monotone && growth > GROWTH_THRESHOLD {
        GrowthClass::MonotoneIncreasing
    } else {
        GrowthClass::Saturating
    }
}

#[derive(Debug, Clone)]
pub struct RigidityReport {
    /// (t, ‖ẑ(t)‖_{L∞_ξ}, ‖t·z∂ₓz‖_{L²}).
    pub rows: Vec<(f64, f64, f64)>,
    /// Slope and intercept of ‖ẑ‖_{L∞} against ln t.
    pub zhat_log_slope: Option<(f64, f64)>,
    /// Power-law fit of ‖t z∂ₓz‖_{L²}; compare the exponent with 1/2.
    pub tzzx_fit: Option<FitResult>,
    pub zhat_class: GrowthClass,
    pub tzzx_class: GrowthClass,
}

pub fn rigidity_observables(sp: &Spectral, state: &FieldState) -> (f64, f64) {
    let zhat = linf(&sp.unitary_transform(&state.z));
    let zx = sp.derivative(&state.z);
    let p: Vec<C64> = state.z.iter().zip(&zx).map(|(a, b)| a * b * state.t).collect();
    (zhat, l2(&p, state.grid.dx()))
}

/// Runs the solver and reports both rigidity observables with their fits over t ≥ 1.
pub fn rigidity_probe(solver: &Solver, z0: &FieldState, t_end: f64) -> Result<RigidityReport> {
    let mut rows = Vec::new();
    let sp = solver.spectral();
    solver.evolve(z0, t_end, &mut |s| {
        let (a, b) = rigidity_observables(sp, s);
        rows.push((s.t, a, b));
        Ok(())
    })?;
    Ok(rigidity_report(rows))
}

pub fn rigidity_report(rows: Vec<(f64, f64, f64)>) -> RigidityReport {
    let late: Vec<&(f64, f64, f64)> = rows.iter().filter(|r| r.0 >= 1.0).collect();
    let zhat_log_slope = if late.len() >= 2 {
        let x: Vec<f64> = late.iter().map(|r| r.0.ln()).collect();
        let y: Vec<f64> = late.iter().map(|r| r.1).collect();
        linear_fit(&x, &y).ok().map(|(s, i, _)| (s, i))
    } else {
        None
    };
    let tzzx: Vec<(f64, f64)> = late.iter().map(|r| (r.0, r.2)).collect();
    let window = (tzzx.first().map_or(1.0, |p| p.0), tzzx.last().map_or(1.0, |p| p.0));
    let tzzx_fit = power_law_fit(&tzzx, window).ok();
    let zhat: Vec<(f64, f64)> = late.iter().map(|r| (r.0, r.1)).collect();
    let (zhat_class, tzzx_class) = if late.is_empty() {
        let all0 = rows.iter().all(|r| r.1 == 0.0 && r.2 == 0.0);
        let c = if all0 { GrowthClass::Zero } else { GrowthClass::Saturating };
        (c, c)
    } else {
        (classify(&zhat), classify(&tzzx))
    };
    RigidityReport { rows, zhat_log_slope, tzzx_fit, zhat_class, tzzx_class }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::profile::fourier_profile;
    use crate::metric::{CatalogMetric, MetricSpec};
    use crate::spectral::{free_evolution, GridSpec, InitialData, Nonlinearity, SolverConfig};

    #[test]
    fn zero_state_zero_gap() {
        let g = GridSpec::new(32.0, 512).unwrap();
        let z = FieldState::zeros(10.0, g);
        assert_eq!(asymptotic_compare(&z, &|_| C64::new(0.0, 0.0), 2.0), (0.0, 0.0));
    }

    #[test]
    fn free_gaussian_remainder_decays() {
        let g = GridSpec::new(512.0, 8192).unwrap();
        let sp = Spectral::new(g);
        let z0 = InitialData::Gaussian { epsilon: 0.05, sigma0: 1.0 }.sample(g, 0.0);
        let w0 = fourier_profile(&sp, &z0);
        let psi = SampledProfile::from_fft_order(&sp, &w0);
        let mut pts = Vec::new();
        for k in 0..12 {
            let t = 10.0 * 1.2f64.powi(k);
            let (gi, _) = asymptotic_compare(&free_evolution(&z0, t), &|y| psi.eval(y), 0.0);
            pts.push((t, gi));
        }
        let fit = power_law_fit(&pts, (10.0, 100.0)).unwrap();
        assert!(fit.exponent <= -5.0 / 8.0, "{fit:?}");
    }

    #[test]
    fn main_term_reproduces_profile_at_extraction_time() {
        let g = GridSpec::new(32.0, 512).unwrap();
        let sp = Spectral::new(g);
        let prof = FieldState::new(8.0, g, sp.xi().iter().map(|&x| C64::new((-x * x).exp(), 0.3 * x)).collect());
        let psi = extract_psi(&sp, &prof, 2.0);
        let t = 8.0;
        for &xi in &[0.0, 0.5, -1.25] {
            let k = sp.xi().iter().position(|&v| (v - xi).abs() < 1e-12);
            if let Some(k) = k {
                let m = main_term(2.0 * t * xi, t, psi.eval(xi), 2.0);
                let expect = (C64::new(0.0, 2.0 * t)).sqrt().inv() * prof.z[k] * C64::from_polar(1.0, t * xi * xi);
                assert!((m - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn classification_cases() {
        let grow: Vec<(f64, f64)> = (1..50).map(|k| (k as f64, (k as f64).ln() + 1.0)).collect();
        assert_eq!(classify(&grow), GrowthClass::MonotoneIncreasing);
        let sat: Vec<(f64, f64)> = (1..50).map(|k| (k as f64, 1.0 - 1e-4 / k as f64)).collect();
        assert_eq!(classify(&sat), GrowthClass::Saturating);
        let zero: Vec<(f64, f64)> = (1..50).map(|k| (k as f64, 0.0)).collect();
        assert_eq!(classify(&zero), GrowthClass::Zero);
    }

    #[test]
    fn zero_data_probe() {
        let g = GridSpec::new(32.0, 512).unwrap();
        let cfg = SolverConfig { dt: 0.1, diag_stride: 5, ..Default::default() };
        let solver = Solver::new(g, cfg, Nonlinearity::Metric(MetricSpec::catalog(CatalogMetric::C5Nonzero))).unwrap();
        let r = rigidity_probe(&solver, &FieldState::zeros(0.0, g), 5.0).unwrap();
        assert!(r.rows.iter().all(|x| x.1 == 0.0 && x.2 == 0.0));
        assert_eq!(r.zhat_class, GrowthClass::Zero);
        assert_eq!(r.tzzx_class, GrowthClass::Zero);
    }
}
