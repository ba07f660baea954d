use crate::diagnostics::SampledProfile;
use crate::error::{Result, SmfError};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Default number of derivatives in the weighted smallness norm.
pub const DEFAULT_M: usize = 8;
pub const DEFAULT_EPS_STAR: f64 = 0.05;

/// Asymptotic datum ψ(y).
#[derive(Debug, Clone)]
pub enum Psi {
    Zero,
    /// amplitude·exp(−y²/(2σ²))
    Gaussian { amplitude: f64, sigma: f64 },
    Sampled(SampledProfile),
}

/// Physicists' Hermite polynomial H_n(u).
fn hermite(n: usize, u: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * u);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * u * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

impl Psi {
    pub fn gaussian(amplitude: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite() && amplitude.is_finite()) {
            return Err(SmfError::InvalidInput(format!("gaussian profile needs σ > 0, got σ = {sigma}")));
        }
        Ok(Psi::Gaussian { amplitude, sigma })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Psi::Zero => true,
            Psi::Gaussian { amplitude, .. } => *amplitude == 0.0,
            Psi::Sampled(s) => s.values.iter().all(|v| v.norm() == 0.0),
        }
    }

    pub fn eval(&self, y: f64) -> C64 {
        match self {
            Psi::Zero => C64::new(0.0, 0.0),
            Psi::Gaussian { amplitude, sigma } => C64::new(amplitude * (-y * y / (2.0 * sigma * sigma)).exp(), 0.0),
            Psi::Sampled(s) => s.eval(y),
        }
    }

    /// j-th derivative; exact for the Gaussian, `None` for sampled data.
    pub fn derivative(&self, y: f64, j: usize) -> Option<C64> {
        match self {
            Psi::Zero => Some(C64::new(0.0, 0.0)),
            Psi::Gaussian { amplitude, sigma } => {
                let s = sigma * 2f64.sqrt();
                let u = y / s;
                let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
                Some(C64::new(amplitude * sign * s.powi(-(j as i32)) * hermite(j, u) * (-u * u).exp(), 0.0))
            }
            Psi::Sampled(_) => None,
        }
    }

    /// |y| beyond which |ψ| is below 1e−16 of its maximum.
    pub fn support_radius(&self) -> f64 {
        match self {
            Psi::Zero => 1.0,
            Psi::Gaussian { sigma, .. } => sigma * (2.0 * 16.0 * 10f64.ln()).sqrt(),
            Psi::Sampled(s) => s.start.abs().max(s.start + s.step * (s.values.len() - 1) as f64),
        }
    }

    pub fn sup(&self) -> f64 {
        match self {
            Psi::Zero => 0.0,
            Psi::Gaussian { amplitude, .. } => amplitude.abs(),
            Psi::Sampled(s) => s.values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }

    /// Uniform samples of ψ and its first m derivatives on a window covering the support.
    fn derivative_samples(&self, m: usize) -> (f64, Vec<f64>, Vec<Vec<C64>>) {
        match self {
            Psi::Sampled(s) => {
                let n = s.values.len();
                let mut planner = FftPlanner::new();
                let fwd = planner.plan_fft_forward(n);
                let inv = planner.plan_fft_inverse(n);
                let mut hat = s.values.clone();
                fwd.process(&mut hat);
                // modes at round-off level would be amplified by k^m
                let floor = 1e-14 * hat.iter().map(|v| v.norm()).fold(0.0, f64::max);
                for v in hat.iter_mut().filter(|v| v.norm() <= floor) {
                    *v = C64::new(0.0, 0.0);
                }
                let len = s.step * n as f64;
                let k: Vec<f64> = (0..n)
                    .map(|j| {
                        let kk = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                        if n % 2 == 0 && j == n / 2 {
                            0.0
                        } else {
                            2.0 * PI * kk / len
                        }
                    })
                    .collect();
                let ys: Vec<f64> = (0..n).map(|j| s.start + j as f64 * s.step).collect();
                let mut out = vec![s.values.clone()];
                for d in 1..=m {
                    let mut v: Vec<C64> =
                        hat.iter().zip(&k).map(|(a, &kk)| a * C64::new(0.0, kk).powu(d as u32) / n as f64).collect();
                    inv.process(&mut v);
                    out.push(v);
                }
                (s.step, ys, out)
            }
            _ => {
                let r = self.support_radius() + 4.0;
                let h = match self {
                    Psi::Gaussian { sigma, .. } => (sigma / 64.0).min(0.05),
                    _ => 0.05,
                };
                let n = (2.0 * r / h).ceil() as usize + 1;
                let ys: Vec<f64> = (0..n).map(|j| -r + j as f64 * h).collect();
                let out = (0..=m).map(|d| ys.iter().map(|&y| self.derivative(y, d).unwrap()).collect()).collect();
                (h, ys, out)
            }
        }
    }

    /// Σ_{j≤m} ‖⟨y⟩ψ^{(j)}‖_{L²∩L∞}, with ‖f‖_{L²∩L∞} = ‖f‖_{L²} + ‖f‖_{L∞}.
    pub fn weighted_norm(&self, m: usize) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (h, ys, ders) = self.derivative_samples(m);
        ders.iter()
            .map(|d| {
                let mut l2 = 0.0;
                let mut li: f64 = 0.0;
                for (v, &y) in d.iter().zip(&ys) {
                    let a = (1.0 + y * y).sqrt() * v.norm();
                    l2 += a * a;
                    li = li.max(a);
                }
                (l2 * h).sqrt() + li
            })
            .sum()
    }

    /// Returns the weighted norm, or `ProfileTooLarge` when it exceeds ε_*.
    pub fn check_smallness(&self, m: usize, eps_star: f64) -> Result<f64> {
        let norm = self.weighted_norm(m);
        if norm > eps_star {
            return Err(SmfError::ProfileTooLarge { norm, bound: eps_star });
        }
        Ok(norm)
    }
}

/// Value of −θ + 9(θ+1)/(2m) + ½; the wave-operator argument needs it negative.
pub fn m_theta_margin(m: usize, theta: f64) -> f64 {
    -theta + 9.0 * (theta + 1.0) / (2.0 * m as f64) + 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let p = Psi::gaussian(0.7, 1.3).unwrap();
        let h = 1e-4;
        for &y in &[-1.1, 0.0, 0.4, 2.5] {
            for j in 0..4 {
                let fd = (p.derivative(y + h, j).unwrap() - p.derivative(y - h, j).unwrap()) / (2.0 * h);
                assert!((fd - p.derivative(y, j + 1).unwrap()).norm() < 1e-6, "j={j} y={y}");
            }
        }
    }

    #[test]
    fn zero_profile_norm() {
        assert_eq!(Psi::Zero.weighted_norm(8), 0.0);
        assert_eq!(Psi::gaussian(0.0, 1.0).unwrap().weighted_norm(8), 0.0);
    }

    #[test]
    fn norm_is_linear_in_amplitude() {
        let a = Psi::gaussian(1.0, 1.0).unwrap().weighted_norm(8);
        let b = Psi::gaussian(1e-4, 1.0).unwrap().weighted_norm(8);
        assert!((b - 1e-4 * a).abs() < 1e-12 * a);
        assert!(Psi::gaussian(1e-4, 1.0).unwrap().check_smallness(8, 0.05).is_ok());
        assert!(matches!(
            Psi::gaussian(1e-2, 1.0).unwrap().check_smallness(8, 0.05),
            Err(SmfError::ProfileTooLarge { .. })
        ));
    }

    #[test]
    fn zeroth_term_oracle() {
        // m = 0: ‖⟨y⟩e^{−y²/2}‖_{L²} = (√π·(1 + 1/2))^{1/2}, sup of ⟨y⟩e^{−y²/2} is 1 at y = 0
        let n = Psi::gaussian(1.0, 1.0).unwrap().weighted_norm(0);
        let want = (PI.sqrt() * 1.5).sqrt() + 1.0;
        assert!((n - want).abs() < 1e-9, "{n} vs {want}");
    }

    #[test]
    fn sampled_matches_gaussian() {
        let g = Psi::gaussian(1.0, 1.0).unwrap();
        let n = 1024;
        let step = 24.0 / n as f64;
        let values = (0..n).map(|j| g.eval(-12.0 + j as f64 * step)).collect();
        let s = Psi::Sampled(SampledProfile { start: -12.0, step, values });
        let (a, b) = (g.weighted_norm(8), s.weighted_norm(8));
        assert!((a - b).abs() < 1e-3 * a, "{a} vs {b}");
    }

    #[test]
    fn m_theta_condition() {
        // m = 8 needs θ > 17/7, so no θ ∈ (½, 1) qualifies
        for k in 1..10 {
            assert!(m_theta_margin(8, 0.5 + 0.05 * k as f64) > 0.0);
        }
        assert!(m_theta_margin(100, 0.6) < 0.0);
        assert!(m_theta_margin(20, 0.95) < 0.0);
        assert!(m_theta_margin(18, 0.999) > 0.0);
    }
}
