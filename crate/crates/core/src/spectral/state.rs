use super::grid::GridSpec;
use num_complex::Complex64 as C64;

/// Samples of z(t, ·) on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub grid: GridSpec,
    pub z: Vec<C64>,
}

impl FieldState {
    pub fn new(t: f64, grid: GridSpec, z: Vec<C64>) -> Self {
        assert_eq!(z.len(), grid.n, "sample count must match the grid");
        FieldState { t, grid, z }
    }

    pub fn zeros(t: f64, grid: GridSpec) -> Self {
        FieldState { t, grid, z: vec![C64::new(0.0, 0.0); grid.n] }
    }

    pub fn max_modulus(&self) -> f64 {
        self.z.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn l2(&self) -> f64 {
        (self.grid.dx() * self.z.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// ∫_{|x|>0.9Λ}|z|² / ∫|z|²; zero for the zero field.
    pub fn boundary_mass_fraction(&self) -> f64 {
        let cut = 0.9 * self.grid.half_length;
        let mut edge = 0.0;
        let mut total = 0.0;
        for (j, v) in self.z.iter().enumerate() {
            let m = v.norm_sqr();
            total += m;
            if self.grid.x(j).abs() > cut {
                edge += m;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            edge / total
        }
    }

    pub fn has_non_finite(&self) -> bool {
        self.z.iter().any(|v| !v.is_finite())
    }

    pub fn with_samples(&self, z: Vec<C64>) -> FieldState {
        FieldState::new(self.t, self.grid, z)
    }
}

/// Families of small initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    /// ε·exp(−x²/(2σ₀²))
    Gaussian { epsilon: f64, sigma0: f64 },
    /// ε·(x/σ₀)^degree·exp(−x²/(2σ₀²))
    GaussianPoly { epsilon: f64, sigma0: f64, degree: u32 },
    /// ε·sech(x/σ₀)
    Sech { epsilon: f64, sigma0: f64 },
}

impl InitialData {
    pub fn value(&self, x: f64) -> C64 {
        match *self {
            InitialData::Gaussian { epsilon, sigma0 } => C64::new(epsilon * (-x * x / (2.0 * sigma0 * sigma0)).exp(), 0.0),
            InitialData::GaussianPoly { epsilon, sigma0, degree } => {
                let s = x / sigma0;
                C64::new(epsilon * s.powi(degree as i32) * (-s * s / 2.0).exp(), 0.0)
            }
            InitialData::Sech { epsilon, sigma0 } => C64::new(epsilon / (x / sigma0).cosh(), 0.0),
        }
    }

    pub fn sample(&self, grid: GridSpec, t0: f64) -> FieldState {
        FieldState::new(t0, grid, grid.xs().iter().map(|&x| self.value(x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_norm_and_boundary() {
        let g = GridSpec::new(40.0, 1024).unwrap();
        let s = InitialData::Gaussian { epsilon: 0.05, sigma0: 1.0 }.sample(g, 0.0);
        let exact = 0.05 * std::f64::consts::PI.sqrt().sqrt();
        assert!((s.l2() - exact).abs() < 1e-14);
        assert!(s.boundary_mass_fraction() < 1e-300);
        assert_eq!(FieldState::zeros(0.0, g).boundary_mass_fraction(), 0.0);
    }
}
