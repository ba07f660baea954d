use crate::error::{Result, SmfError};
use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Periodic grid on [−Λ, Λ) with n points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_length: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(half_length: f64, n: usize) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(SmfError::InvalidInput(format!("grid half-length must be positive, got {half_length}")));
        }
        if n < 256 || !n.is_power_of_two() {
            return Err(SmfError::InvalidInput(format!("grid size must be a power of two ≥ 256, got {n}")));
        }
        let g = GridSpec { half_length, n };
        if g.dx() >= 1.0 {
            return Err(SmfError::InvalidInput(format!("grid spacing {} must be below 1", g.dx())));
        }
        Ok(g)
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// ξ_k = πk/Λ in FFT ordering.
    pub fn wavenumber(&self, k: usize) -> f64 {
        let kk = if k < self.n / 2 { k as f64 } else { k as f64 - self.n as f64 };
        PI * kk / self.half_length
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.wavenumber(k)).collect()
    }

    pub fn doubled(&self) -> GridSpec {
        GridSpec { half_length: self.half_length, n: 2 * self.n }
    }
}

/// FFT plans and wavenumbers for one grid; a per-run resource.
#[derive(Clone)]
pub struct Spectral {
    grid: GridSpec,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    xi: Vec<f64>,
    /// iξ with the Nyquist mode removed.
    ik: Vec<C64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

impl Spectral {
    pub fn new(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.n);
        let inv = planner.plan_fft_inverse(grid.n);
        let xi = grid.wavenumbers();
        let ik = xi
            .iter()
            .enumerate()
            .map(|(k, &x)| if k == grid.n / 2 { C64::new(0.0, 0.0) } else { C64::new(0.0, x) })
            .collect();
        Spectral { grid, fwd, inv, xi, ik }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Unnormalized forward DFT in place.
    pub fn forward(&self, data: &mut [C64]) {
        self.fwd.process(data);
    }

    /// Inverse DFT in place, normalized so that inverse(forward(u)) = u.
    pub fn inverse(&self, data: &mut [C64]) {
        self.inv.process(data);
        let s = 1.0 / self.grid.n as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }

    pub fn to_fourier(&self, u: &[C64]) -> Vec<C64> {
        let mut v = u.to_vec();
        self.forward(&mut v);
        v
    }

    pub fn to_physical(&self, uhat: &[C64]) -> Vec<C64> {
        let mut v = uhat.to_vec();
        self.inverse(&mut v);
        v
    }

    /// Physical-space ∂ₓ of Fourier data.
    pub fn derivative_of_hat(&self, uhat: &[C64]) -> Vec<C64> {
        let mut v: Vec<C64> = uhat.iter().zip(&self.ik).map(|(a, b)| a * b).collect();
        self.inverse(&mut v);
        v
    }

    pub fn derivative(&self, u: &[C64]) -> Vec<C64> {
        self.derivative_of_hat(&self.to_fourier(u))
    }

    pub fn second_derivative(&self, u: &[C64]) -> Vec<C64> {
        let mut v = self.to_fourier(u);
        for (a, &x) in v.iter_mut().zip(&self.xi) {
            *a *= -x * x;
        }
        self.inverse(&mut v);
        v
    }

    /// 1 for |k| ≤ fraction·n/2, 0 otherwise.
    pub fn dealias_mask(&self, fraction: f64) -> Vec<f64> {
        let cutoff = fraction * (self.grid.n / 2) as f64;
        (0..self.grid.n)
            .map(|k| {
                let kk = if k < self.grid.n / 2 { k as f64 } else { self.grid.n as f64 - k as f64 };
                if kk <= cutoff + 1e-9 {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// ∫|u|² dx via Parseval on Fourier data.
    pub fn l2_sq_of_hat(&self, uhat: &[C64]) -> f64 {
        self.grid.dx() / self.grid.n as f64 * uhat.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    /// ‖u‖_{H^k} = (∫(1+ξ²)^k |û|² dξ)^{1/2} on Fourier data.
    pub fn sobolev_of_hat(&self, uhat: &[C64], k: i32) -> f64 {
        let s: f64 = uhat.iter().zip(&self.xi).map(|(a, &x)| (1.0 + x * x).powi(k) * a.norm_sqr()).sum();
        (self.grid.dx() / self.grid.n as f64 * s).sqrt()
    }

    /// Unitary transform û(ξ_k) = (2π)^{-1/2}∫e^{-ixξ_k}u dx on the grid wavenumbers.
    pub fn unitary_transform(&self, u: &[C64]) -> Vec<C64> {
        let mut v = self.to_fourier(u);
        let s = self.grid.dx() / (2.0 * PI).sqrt();
        let x0 = -self.grid.half_length;
        for (a, &x) in v.iter_mut().zip(&self.xi) {
            *a *= C64::from_polar(s, -x * x0);
        }
        v
    }

    /// Inverse of [`Spectral::unitary_transform`].
    pub fn from_unitary(&self, uhat: &[C64]) -> Vec<C64> {
        let s = (2.0 * PI).sqrt() / self.grid.dx();
        let x0 = -self.grid.half_length;
        let mut v: Vec<C64> = uhat.iter().zip(&self.xi).map(|(a, &x)| a * C64::from_polar(s, x * x0)).collect();
        self.inverse(&mut v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(200.0, 4096).is_ok());
        assert!(GridSpec::new(200.0, 1000).is_err());
        assert!(GridSpec::new(200.0, 128).is_err());
        assert!(GridSpec::new(2000.0, 1024).is_err());
        assert!(GridSpec::new(-1.0, 1024).is_err());
    }

    #[test]
    fn spectral_derivative_of_gaussian() {
        let g = GridSpec::new(20.0, 512).unwrap();
        let sp = Spectral::new(g);
        let u: Vec<C64> = g.xs().iter().map(|&x| C64::new((-x * x).exp(), 0.0)).collect();
        let du = sp.derivative(&u);
        let d2 = sp.second_derivative(&u);
        for (j, &x) in g.xs().iter().enumerate() {
            let e = (-x * x).exp();
            assert!((du[j].re + 2.0 * x * e).abs() < 1e-12);
            assert!((d2[j].re - (4.0 * x * x - 2.0) * e).abs() < 1e-11);
        }
    }

    #[test]
    fn unitary_transform_of_gaussian() {
        let g = GridSpec::new(20.0, 512).unwrap();
        let sp = Spectral::new(g);
        let u: Vec<C64> = g.xs().iter().map(|&x| C64::new((-x * x / 2.0).exp(), 0.0)).collect();
        let uh = sp.unitary_transform(&u);
        for (k, &xi) in sp.xi().iter().enumerate() {
            assert!((uh[k] - C64::new((-xi * xi / 2.0).exp(), 0.0)).norm() < 1e-13);
        }
        let back = sp.from_unitary(&uh);
        for j in 0..g.n {
            assert!((back[j] - u[j]).norm() < 1e-14);
        }
    }

    #[test]
    fn dealias_mask_counts() {
        let sp = Spectral::new(GridSpec::new(10.0, 256).unwrap());
        let m = sp.dealias_mask(2.0 / 3.0);
        let kept = m.iter().filter(|&&v| v == 1.0).count();
        assert_eq!(kept, 2 * 85 + 1);
    }
}
