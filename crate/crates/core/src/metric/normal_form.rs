use super::jet::{log_metric_jet, JetOptions, MetricJet};
use super::MetricSpec;
use crate::error::{Result, SmfError};
use crate::par::{self, Execution};
use num_complex::Complex64 as C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// K(Q) = −2 λ₁₁ / h₀.
pub fn curvature_at(jet: &MetricJet) -> Result<f64> {
    if jet.order() < 2 {
        return Err(SmfError::InvalidInput("curvature needs a jet of order ≥ 2".into()));
    }
    let l11 = jet.lambda(1, 1);
    if l11.im.abs() >= 1e-10 * (1.0 + l11.re.abs()) {
        return Err(SmfError::NonRealCurvature(l11.im));
    }
    Ok(-2.0 * l11.re / jet.h0())
}

/// [ln h]_z [ln h]_{zz̄} − [ln h]_{zz̄z} at the base point, i.e. λ₁₀λ₁₁ − 2λ₂₁.
pub fn intrinsic_vanishing_residual(jet: &MetricJet) -> C64 {
    jet.lambda(1, 0) * jet.lambda(1, 1) - 2.0 * jet.lambda(2, 1)
}

/// Coefficients of h_z/h = c0 + c1 z̄ + c2 z + c3 z² + c4 z̄² + c5 z z̄ + O(|z|³).
pub fn extract_c_coefficients(jet: &MetricJet) -> Result<[C64; 6]> {
    if jet.order() < 3 {
        return Err(SmfError::InvalidInput("c-coefficients need a jet of order ≥ 3".into()));
    }
    let c = [
        jet.lambda(1, 0),
        jet.lambda(1, 1),
        2.0 * jet.lambda(2, 0),
        3.0 * jet.lambda(3, 0),
        jet.lambda(1, 2),
        2.0 * jet.lambda(2, 1),
    ];
    let scale = 1.0 + c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if c[1].im.abs() > 1e-10 * scale {
        return Err(SmfError::JetInconsistency(format!("c1 not real (Im = {:e})", c[1].im)));
    }
    if (c[5] - 2.0 * c[4].conj()).norm() > 1e-10 * scale {
        return Err(SmfError::JetInconsistency("c5 ≠ 2·conj(c4)".into()));
    }
    Ok(c)
}

/// Triangular solve of 2γ₁+c₀=0, 6γ₂+c₂+2γ₁c₀=0, 12γ₃+c₃+2γ₁c₂+3γ₂c₀=0.
pub fn solve_gamma(c0: C64, c2: C64, c3: C64) -> [C64; 3] {
    let g1 = -c0 / 2.0;
    let g2 = -(c2 + 2.0 * g1 * c0) / 6.0;
    let g3 = -(c3 + 2.0 * g1 * c2 + 3.0 * g2 * c0) / 12.0;
    [g1, g2, g3]
}

/// (ν₁, ν₂, ν₃) = (c₁, c₅ − 2γ₁c₁, c₄ − c₁·conj(γ₁)).
pub fn nu_coefficients(c: &[C64; 6], gamma1: C64) -> [C64; 3] {
    let c1 = C64::new(c[1].re, 0.0);
    [c1, c[5] - 2.0 * gamma1 * c1, c[4] - c1 * gamma1.conj()]
}

/// Every constant of the quartic normal form at a point.
///
/// The flow in the chart is i∂ₜz + Δz = −(h_z/h)(∂ₓz)², so the transform
/// w = z + γ₁z² + γ₂z³ + γ₃z⁴ solves the γ-system for the coefficients −c and
/// w satisfies i∂ₜw + Δw = −(ν₁w̄ + ν₂|w|² + ν₃w̄²)(∂ₓw)² + O(|w|³)(∂ₓw)².
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormCoefficients {
    pub c: [C64; 6],
    pub gamma: [C64; 3],
    pub nu: [C64; 3],
    pub curvature: f64,
    pub h0: f64,
    /// c = −½ K h₀, the phase-correction constant.
    pub c_phase: f64,
    pub vanishing_residual: C64,
}

impl NormalFormCoefficients {
    pub fn from_jet(jet: &MetricJet) -> Result<Self> {
        let c = extract_c_coefficients(jet)?;
        let gamma = solve_gamma(-c[0], -c[2], -c[3]);
        let nu = nu_coefficients(&c, gamma[0]);
        let curvature = curvature_at(jet)?;
        let h0 = jet.h0();
        Ok(NormalFormCoefficients {
            c,
            gamma,
            nu,
            curvature,
            h0,
            c_phase: -0.5 * curvature * h0,
            vanishing_residual: intrinsic_vanishing_residual(jet),
        })
    }

    pub fn from_spec(spec: &MetricSpec) -> Result<Self> {
        let jet = log_metric_jet(spec, 4, &JetOptions::default())?;
        Self::from_jet(&jet)
    }

    /// Coefficients (μ₁, μ₂, μ₃) of the normal-form equation written as
    /// i∂ₜw + Δw = (μ₁w̄ + μ₂|w|² + μ₃w̄²)(∂ₓw)²; equal to −ν.
    pub fn flow_nu(&self) -> [C64; 3] {
        [-self.nu[0], -self.nu[1], -self.nu[2]]
    }

    pub fn is_vanishing_point(&self, tol: f64) -> bool {
        self.vanishing_residual.norm() < tol
    }

    /// Largest deviation of each algebraic identity that must hold at every point.
    pub fn identity_defects(&self) -> Vec<(&'static str, f64)> {
        let [g1, g2, g3] = self.gamma;
        let (c0, c2, c3) = (-self.c[0], -self.c[2], -self.c[3]);
        vec![
            ("c1 real", self.c[1].im.abs()),
            ("c5 = 2 conj(c4)", (self.c[5] - 2.0 * self.c[4].conj()).norm()),
            ("nu1 = c1", (self.nu[0] - self.c[1]).norm()),
            ("nu2 = 2 conj(nu3)", (self.nu[1] - 2.0 * self.nu[2].conj()).norm()),
            ("c = c1", (self.c_phase - self.c[1].re).abs()),
            (
                "gamma system",
                (2.0 * g1 + c0)
                    .norm()
                    .max((6.0 * g2 + c2 + 2.0 * g1 * c0).norm())
                    .max((12.0 * g3 + c3 + 2.0 * g1 * c2 + 3.0 * g2 * c0).norm()),
            ),
        ]
    }
}

fn quartic(z: C64, g: &[C64; 3]) -> C64 {
    z * (1.0 + z * (g[0] + z * (g[1] + z * g[2])))
}

fn quartic_prime(z: C64, g: &[C64; 3]) -> C64 {
    1.0 + z * (2.0 * g[0] + z * (3.0 * g[1] + z * 4.0 * g[2]))
}

/// w = z + γ₁z² + γ₂z³ + γ₃z⁴ per sample.
pub fn forward_transform(z: &[C64], gamma: &[C64; 3]) -> Vec<C64> {
    forward_transform_with(Execution::default(), z, gamma)
}

pub fn forward_transform_with(exec: Execution, z: &[C64], gamma: &[C64; 3]) -> Vec<C64> {
    let mut out = vec![ZERO; z.len()];
    par::fill(exec, &mut out, |i| quartic(z[i], gamma));
    out
}

fn newton_invert(w: C64, g: &[C64; 3]) -> Option<C64> {
    let mut z = w;
    for _ in 0..30 {
        let r = quartic(z, g) - w;
        let d = r / quartic_prime(z, g);
        if !d.is_finite() {
            return None;
        }
        z -= d;
        if d.norm() <= 2.0 * f64::EPSILON * z.norm() || d == ZERO {
            let res = (quartic(z, g) - w).norm();
            return (res < 1e-13).then_some(z);
        }
    }
    None
}

/// Inverts the quartic per sample by Newton iteration seeded at w.
pub fn inverse_transform(w: &[C64], gamma: &[C64; 3]) -> Result<Vec<C64>> {
    if gamma.iter().all(|g| *g == ZERO) {
        return Ok(w.to_vec());
    }
    let mut out = vec![None; w.len()];
    par::fill(Execution::default(), &mut out, |i| newton_invert(w[i], gamma));
    out.into_iter()
        .enumerate()
        .map(|(i, z)| z.ok_or(SmfError::NewtonDivergence { index: i, modulus: w[i].norm() }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{CatalogMetric, MetricSpec};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn nf(m: CatalogMetric) -> NormalFormCoefficients {
        NormalFormCoefficients::from_spec(&MetricSpec::catalog(m)).unwrap()
    }

    #[test]
    fn curvature_oracles() {
        assert!((nf(CatalogMetric::Sphere).curvature - 4.0).abs() < 1e-12);
        assert!((nf(CatalogMetric::Hyperbolic).curvature + 1.0).abs() < 1e-12);
        assert_eq!(nf(CatalogMetric::Flat).curvature, 0.0);
    }

    #[test]
    fn non_real_curvature_rejected() {
        let mut s = crate::metric::series::BiSeries::zero(2);
        s.set(1, 1, C64::new(1.0, 0.5));
        // from_series enforces reality, so build an asymmetric jet through the raw path
        assert!(MetricJet::from_series(s).is_err());
    }

    #[test]
    fn residual_oracles() {
        assert!(nf(CatalogMetric::Sphere).vanishing_residual.norm() < 1e-14);
        let a = 0.7;
        let r = nf(CatalogMetric::NonvanishingA { a }).vanishing_residual;
        assert!((r - c(a)).norm() < 1e-14);
        let spec = MetricSpec::catalog(CatalogMetric::Remark11 { c1: 0.5, c2: 0.0, c3: 0.0, c4: 0.25 })
            .with_base_point(c(1.0));
        let jet = log_metric_jet(&spec, 4, &JetOptions::default()).unwrap();
        assert!(intrinsic_vanishing_residual(&jet).norm() < 1e-12);
    }

    #[test]
    fn c_coefficient_oracles() {
        let s = nf(CatalogMetric::Sphere).c;
        assert_eq!(s, [ZERO, c(-2.0), ZERO, ZERO, ZERO, ZERO]);
        let e = nf(CatalogMetric::ExpLinear).c;
        assert_eq!(e, [c(1.0), ZERO, ZERO, ZERO, ZERO, ZERO]);
        assert!(nf(CatalogMetric::Flat).c.iter().all(|x| *x == ZERO));
    }

    #[test]
    fn gamma_oracles() {
        assert_eq!(solve_gamma(ZERO, ZERO, ZERO), [ZERO; 3]);
        let g = solve_gamma(c(1.0), ZERO, ZERO);
        let want = [c(-0.5), c(1.0 / 6.0), c(-1.0 / 24.0)];
        for i in 0..3 {
            assert!((g[i] - want[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn nu_oracles() {
        let sphere = [ZERO, c(-2.0), ZERO, ZERO, ZERO, ZERO];
        assert_eq!(nu_coefficients(&sphere, ZERO), [c(-2.0), ZERO, ZERO]);
        let a = 0.3;
        let nv = nu_coefficients(&[c(1.0), c(a), ZERO, ZERO, ZERO, ZERO], c(-0.5));
        assert_eq!(nv, [c(a), c(a), c(a / 2.0)]);
        assert_eq!(nu_coefficients(&[ZERO; 6], ZERO), [ZERO; 3]);
    }

    #[test]
    fn flow_normalization_for_exp_linear() {
        // h_z/h ≡ 1 gives i∂z + Δz = −(∂z)², linearized exactly by e^z − 1
        let n = nf(CatalogMetric::ExpLinear);
        let want = [c(0.5), c(1.0 / 6.0), c(1.0 / 24.0)];
        for i in 0..3 {
            assert!((n.gamma[i] - want[i]).norm() < 1e-12);
        }
        assert_eq!(n.nu, [ZERO; 3]);
    }

    #[test]
    fn zero_residual_means_zero_nu_on_catalog() {
        for m in CatalogMetric::all_default() {
            let n = nf(m);
            for (name, d) in n.identity_defects() {
                assert!(d < 1e-10, "{m}: {name} defect {d:e}");
            }
            if n.is_vanishing_point(1e-10) {
                assert!(n.nu[1].norm() < 1e-9 && n.nu[2].norm() < 1e-9, "{m}");
            }
            assert!((n.nu[1] + n.vanishing_residual).norm() < 1e-12, "{m}");
        }
    }

    #[test]
    fn forward_transform_oracle() {
        let g = [c(-0.5), c(1.0 / 6.0), c(-1.0 / 24.0)];
        let w = forward_transform(&[c(0.1)], &g)[0];
        let want = 0.1 - 0.005 + 1.0 / 6.0 * 1e-3 - 1.0 / 24.0 * 1e-4;
        assert!((w - c(want)).norm() < 1e-16);
        let id = forward_transform(&[C64::new(0.2, 0.1)], &[ZERO; 3]);
        assert_eq!(id[0], C64::new(0.2, 0.1));
    }

    #[test]
    fn newton_divergence_reported() {
        let g = [c(-0.5), c(1.0 / 6.0), c(-1.0 / 24.0)];
        let r = inverse_transform(&[c(0.01), C64::new(1e100, 1e100)], &g);
        assert!(matches!(r, Err(SmfError::NewtonDivergence { index: 1, .. })));
    }
}
