use crate::error::{Result, SmfError};
use crate::metric::MetricSpec;
use crate::spectral::{FieldState, Nonlinearity, Solver, Spectral};
use num_complex::Complex64 as C64;

pub fn linf(u: &[C64]) -> f64 {
    u.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// ‖u‖_{L∞} + ‖∂ₓu‖_{L∞} + ‖∂ₓ²u‖_{L∞}.
pub fn w2inf(sp: &Spectral, u: &[C64]) -> f64 {
    let uh = sp.to_fourier(u);
    let ux = sp.derivative_of_hat(&uh);
    let mut uxx = uh;
    for (a, &x) in uxx.iter_mut().zip(sp.xi()) {
        *a *= -x * x;
    }
    sp.inverse(&mut uxx);
    linf(u) + linf(&ux) + linf(&uxx)
}

pub fn sobolev(sp: &Spectral, u: &[C64], k: i32) -> f64 {
    sp.sobolev_of_hat(&sp.to_fourier(u), k)
}

/// E = ½∫h(z)|∂ₓz|² dx.
pub fn energy(sp: &Spectral, state: &FieldState, metric: &MetricSpec) -> f64 {
    let zx = sp.derivative(&state.z);
    0.5 * state.grid.dx() * state.z.iter().zip(&zx).map(|(z, d)| metric.h(*z) * d.norm_sqr()).sum::<f64>()
}

/// 𝓗(w) = ∫(1 − μ₁|w|²)|w|² dx; μ₁ is the w̄(∂ₓw)² coefficient of the normal-form equation.
pub fn mass_functional(w: &FieldState, mu1: f64, chart_radius: f64) -> Result<f64> {
    let m = linf(&w.z);
    if m >= chart_radius {
        return Err(SmfError::ChartExit { t: w.t, max_modulus: m, radius: chart_radius });
    }
    Ok(w.grid.dx() * w.z.iter().map(|v| (1.0 - mu1 * v.norm_sqr()) * v.norm_sqr()).sum::<f64>())
}

/// Lw = i·x·w − 2t·∂ₓw.
pub fn apply_l(sp: &Spectral, w: &FieldState) -> Vec<C64> {
    let wx = sp.derivative(&w.z);
    w.z.iter()
        .zip(&wx)
        .enumerate()
        .map(|(j, (v, d))| C64::new(0.0, w.grid.x(j)) * v - 2.0 * w.t * d)
        .collect()
}

pub fn l2(u: &[C64], dx: f64) -> f64 {
    (dx * u.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
}

/// 𝓛(w) = ∫(1 − μ₁|w|²)|Lw|² dx.
pub fn l_functional(sp: &Spectral, w: &FieldState, mu1: f64) -> f64 {
    let lw = apply_l(sp, w);
    w.grid.dx() * w.z.iter().zip(&lw).map(|(v, l)| (1.0 - mu1 * v.norm_sqr()) * l.norm_sqr()).sum::<f64>()
}

/// Sz = 2t∂ₜz + x∂ₓz with ∂ₜz taken from the equation, and (∫h|Sz|²)^{1/2}
/// (weight 1 for the model right-hand sides).
pub fn apply_s(solver: &Solver, state: &FieldState) -> Result<(Vec<C64>, f64)> {
    let sp = solver.spectral();
    let zt = solver.time_derivative(state)?;
    let zx = sp.derivative(&state.z);
    let s: Vec<C64> = (0..state.z.len()).map(|j| 2.0 * state.t * zt[j] + state.grid.x(j) * zx[j]).collect();
    let weight = |z: C64| match solver.nonlinearity() {
        Nonlinearity::Metric(m) => m.h(z),
        _ => 1.0,
    };
    let norm = (state.grid.dx() * s.iter().zip(&state.z).map(|(v, z)| weight(*z) * v.norm_sqr()).sum::<f64>()).sqrt();
    Ok((s, norm))
}
