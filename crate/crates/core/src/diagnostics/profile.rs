use crate::error::{Result, SmfError};
use crate::spectral::{FieldState, Spectral};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

pub const DEFAULT_PHASE_TOL: f64 = 1e-4;

/// f̂(t,ξ) = e^{itξ²}·ŵ(t,ξ) on the grid wavenumbers (unitary transform).
pub fn fourier_profile(sp: &Spectral, w: &FieldState) -> Vec<C64> {
    let mut v = sp.unitary_transform(&w.z);
    for (a, &x) in v.iter_mut().zip(sp.xi()) {
        *a *= C64::from_polar(1.0, w.t * x * x);
    }
    v
}

/// ŵ(σ) = (2π)^{-1/2}∫e^{-ixσ}w dx by direct quadrature at an arbitrary frequency.
pub fn transform_at(w: &FieldState, sigma: f64) -> C64 {
    let g = w.grid;
    let s: C64 = w.z.iter().enumerate().map(|(j, v)| v * C64::from_polar(1.0, -sigma * g.x(j))).sum();
    s * (g.dx() / (2.0 * PI).sqrt())
}

pub fn profile_at(w: &FieldState, sigma: f64) -> C64 {
    transform_at(w, sigma) * C64::from_polar(1.0, w.t * sigma * sigma)
}

/// 16 values log-spaced in [0.1, 4].
pub fn default_sigmas() -> Vec<f64> {
    log_spaced(0.1, 4.0, 16)
}

pub fn log_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    let mut v: Vec<f64> = (0..n).map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect();
    v[0] = a;
    v[n - 1] = b;
    v
}

/// Trapezoid accumulation of Φ(t,σ) = c∫₁ᵗ σ²|f̂(τ,σ)|²/(2τ) dτ for one frequency.
#[derive(Debug, Clone)]
pub struct PhaseAccumulator {
    pub sigma: f64,
    pub c: f64,
    pub phase_tol: f64,
    last: Option<(f64, f64)>,
    phi: f64,
}

impl PhaseAccumulator {
    pub fn new(sigma: f64, c: f64, phase_tol: f64) -> Self {
        PhaseAccumulator { sigma, c, phase_tol, last: None, phi: 0.0 }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Feeds f̂(t,σ) and returns (Φ, F̂ = e^{iΦ}f̂). Rows with t < 1 leave Φ = 0.
    pub fn push(&mut self, t: f64, f_hat: C64) -> Result<(f64, C64)> {
        if t < 1.0 {
            return Ok((0.0, f_hat));
        }
        let g = self.c * self.sigma * self.sigma * f_hat.norm_sqr() / (2.0 * t);
        if let Some((t0, g0)) = self.last {
            if (g - g0).abs() > 10.0 * self.phase_tol {
                return Err(SmfError::InsufficientSampling { t, jump: (g - g0).abs() });
            }
            self.phi += 0.5 * (g + g0) * (t - t0);
        }
        self.last = Some((t, g));
        Ok((self.phi, f_hat * C64::from_polar(1.0, self.phi)))
    }
}

/// Applies [`PhaseAccumulator`] to a full history of (t, f̂(t,σ)).
pub fn phase_corrected_profile(history: &[(f64, C64)], sigma: f64, c: f64, phase_tol: f64) -> Result<Vec<(f64, C64)>> {
    let mut acc = PhaseAccumulator::new(sigma, c, phase_tol);
    history.iter().map(|&(t, f)| acc.push(t, f).map(|(_, big)| (t, big))).collect()
}

/// Complex samples on a uniform frequency grid with 4-point Lagrange interpolation; zero outside.
#[derive(Debug, Clone)]
pub struct SampledProfile {
    pub start: f64,
    pub step: f64,
    pub values: Vec<C64>,
}

impl SampledProfile {
    /// Reorders FFT-ordered data on the grid wavenumbers into increasing frequency.
    pub fn from_fft_order(sp: &Spectral, data: &[C64]) -> Self {
        let n = data.len();
        let half = n / 2;
        let mut values = Vec::with_capacity(n);
        values.extend_from_slice(&data[half..]);
        values.extend_from_slice(&data[..half]);
        let step = sp.xi()[1];
        SampledProfile { start: -(half as f64) * step, step, values }
    }

    pub fn eval(&self, y: f64) -> C64 {
        let n = self.values.len();
        let s = (y - self.start) / self.step;
        if !(s >= 0.0 && s <= (n - 1) as f64) {
            return C64::new(0.0, 0.0);
        }
        let i = (s.floor() as usize).clamp(1, n.saturating_sub(3).max(1));
        if n < 4 {
            let k = s.round() as usize;
            return self.values[k.min(n - 1)];
        }
        let u = s - i as f64;
        // nodes at −1, 0, 1, 2 relative to i
        let w = [
            -u * (u - 1.0) * (u - 2.0) / 6.0,
            (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
            -(u + 1.0) * u * (u - 2.0) / 2.0,
            (u + 1.0) * u * (u - 1.0) / 6.0,
        ];
        (0..4).map(|k| self.values[i + k - 1] * w[k]).sum()
    }
}
