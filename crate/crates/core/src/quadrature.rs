//! Gauss–Kronrod quadrature (7-point Gauss embedded in 15-point Kronrod).

use crate::error::{Result, SmfError};
use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7K15 panel: returns (Kronrod estimate, |Kronrod − Gauss|).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Complex-valued single panel.
pub fn gk15_complex<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = f(c) * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        k += (f(c - dx) + f(c + dx)) * WGK[j];
    }
    k * h
}

/// Globally adaptive bisection until the summed error estimate is below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let tol = abs_tol.max(rel_tol * total.abs());
        if err <= tol {
            return Ok(total);
        }
        if panels.len() >= max_panels {
            return Err(SmfError::QuadratureFailure { a, b, tolerance: tol, estimate: err });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let m = 0.5 * (pa + pb);
        let (v1, e1) = gk15(f, pa, m);
        let (v2, e2) = gk15(f, m, pb);
        panels.push((pa, m, v1, e1));
        panels.push((m, pb, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let (v, e) = gk15(&|x: f64| x.powi(12) - 3.0 * x.powi(5), -1.0, 2.0);
        let exact = (2f64.powi(13) + 1.0) / 13.0 - 0.5 * (64.0 - 1.0);
        assert!((v - exact).abs() < 1e-11 * exact.abs());
        assert!(e < 1e-8);
    }

    #[test]
    fn adaptive_gaussian() {
        let v = integrate_adaptive(&|x: f64| (-x * x).exp(), -10.0, 10.0, 1e-13, 1e-13, 500).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sqrt_endpoint() {
        let v = integrate_adaptive(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-11, 0.0, 2000).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn failure_is_reported() {
        let r = integrate_adaptive(&|x: f64| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, 1e-15, 0.0, 4);
        assert!(matches!(r, Err(SmfError::QuadratureFailure { .. })));
    }
}
