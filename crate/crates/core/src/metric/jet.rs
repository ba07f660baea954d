use super::series::{binom, factorial, BiSeries};
use super::MetricSpec;
use crate::error::{Result, SmfError};
use num_complex::Complex64 as C64;

/// Taylor coefficients λ_jk of ln h = Σ λ_jk z^j z̄^k at the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricJet {
    lambda: BiSeries,
    h0: f64,
}

impl MetricJet {
    /// Validates the reality symmetry λ_jk = conj(λ_kj) and builds the jet.
    pub fn from_series(lambda: BiSeries) -> Result<Self> {
        let asym = max_asymmetry(&lambda);
        let scale = 1.0 + max_abs(&lambda);
        if asym > 1e-12 * scale {
            return Err(SmfError::JetInconsistency(format!("reality violated by {asym:e}")));
        }
        let l00 = lambda.get(0, 0);
        let h0 = l00.re.exp();
        if !(h0 > 0.0 && h0.is_finite()) {
            return Err(SmfError::JetInconsistency(format!("h0 = {h0} is not positive")));
        }
        Ok(MetricJet { lambda, h0 })
    }

    pub fn order(&self) -> usize {
        self.lambda.deg()
    }

    pub fn lambda(&self, j: usize, k: usize) -> C64 {
        self.lambda.get(j, k)
    }

    pub fn series(&self) -> &BiSeries {
        &self.lambda
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn max_asymmetry(&self) -> f64 {
        max_asymmetry(&self.lambda)
    }
}

fn max_asymmetry(s: &BiSeries) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..=s.deg() {
        for k in 0..=(s.deg() - j) {
            m = m.max((s.get(j, k) - s.get(k, j).conj()).norm());
        }
    }
    m
}

fn max_abs(s: &BiSeries) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..=s.deg() {
        for k in 0..=(s.deg() - j) {
            m = m.max(s.get(j, k).norm());
        }
    }
    m
}

#[derive(Debug, Clone, Copy)]
pub struct JetOptions {
    pub fd_step: f64,
    pub richardson: bool,
    pub reality_tol: f64,
    /// Allowed |analytic − numeric| for coefficients of total degree ≤ 2, 3, 4.
    pub cross_check_tol: [f64; 3],
}

impl Default for JetOptions {
    fn default() -> Self {
        JetOptions { fd_step: 1e-2, richardson: true, reality_tol: 1e-10, cross_check_tol: [1e-9, 1e-7, 1e-5] }
    }
}

/// Finite-difference weights (Fornberg) for derivatives 0..=m at `z` on nodes `x`.
/// Returns `w[k][i]`: weight of node i for the k-th derivative.
pub fn fd_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    (0..=m).map(|k| (0..n).map(|i| c[i][k]).collect()).collect()
}

const HALF_WIDTH: usize = 4;

/// Sixth-order central stencils on the nodes −4..=4 for derivative orders 0..=4.
fn stencils() -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(5);
    for d in 0..=4usize {
        let p: usize = match d {
            0 => 0,
            1 | 2 => 3,
            _ => 4,
        };
        let nodes: Vec<f64> = (-(p as i64)..=p as i64).map(|i| i as f64).collect();
        let w = &fd_weights(0.0, &nodes, d)[d];
        let mut full = vec![0.0; 2 * HALF_WIDTH + 1];
        for (i, &wi) in w.iter().enumerate() {
            full[HALF_WIDTH - p + i] = wi;
        }
        out.push(full);
    }
    out
}

/// Real partials ∂x^a ∂y^b of ln h(base + x + iy) at 0 for a + b ≤ order.
fn real_partials(f: &dyn Fn(C64) -> f64, base: C64, h: f64, order: usize, st: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let m = 2 * HALF_WIDTH + 1;
    let mut samples = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let z = base + C64::new((i as f64 - HALF_WIDTH as f64) * h, (j as f64 - HALF_WIDTH as f64) * h);
            let v = f(z);
            if !v.is_finite() {
                return Err(SmfError::NonPositiveMetric { re: z.re, im: z.im, value: f64::NAN });
            }
            samples[i * m + j] = v;
        }
    }
    let mut p = vec![vec![0.0; order + 1]; order + 1];
    for a in 0..=order {
        for b in 0..=(order - a) {
            let mut acc = 0.0;
            for i in 0..m {
                let wa = st[a][i];
                if wa == 0.0 {
                    continue;
                }
                let mut row = 0.0;
                for j in 0..m {
                    row += st[b][j] * samples[i * m + j];
                }
                acc += wa * row;
            }
            p[a][b] = acc / h.powi((a + b) as i32);
        }
    }
    Ok(p)
}

/// Numerical jet of ln h at the base point by tensor-product central differences with one
/// Richardson step. Positivity of h is checked at every sample.
pub fn log_metric_jet_fd(spec: &MetricSpec, order: usize, opts: &JetOptions) -> Result<MetricJet> {
    if order > 4 {
        return Err(SmfError::InvalidInput(format!("finite-difference jets support order ≤ 4, got {order}")));
    }
    let logh = |z: C64| {
        let v = spec.h(z);
        if v > 0.0 && v.is_finite() {
            v.ln()
        } else {
            f64::NAN
        }
    };
    let st = stencils();
    let h = opts.fd_step;
    let p1 = real_partials(&logh, spec.base_point, h, order, &st)?;
    let p = if opts.richardson {
        let p2 = real_partials(&logh, spec.base_point, 0.5 * h, order, &st)?;
        let mut r = p2.clone();
        for a in 0..=order {
            for b in 0..=(order - a) {
                if a + b > 0 {
                    r[a][b] = (64.0 * p2[a][b] - p1[a][b]) / 63.0;
                }
            }
        }
        r
    } else {
        p1
    };
    let mut lambda = BiSeries::zero(order);
    for j in 0..=order {
        for k in 0..=(order - j) {
            lambda.set(j, k, complex_derivative(&p, j, k));
        }
    }
    let asym = max_asymmetry(&lambda);
    if asym > opts.reality_tol {
        return Err(SmfError::JetInconsistency(format!("numerical jet asymmetry {asym:e}")));
    }
    let mut sym = BiSeries::zero(order);
    for j in 0..=order {
        for k in 0..=(order - j) {
            sym.set(j, k, 0.5 * (lambda.get(j, k) + lambda.get(k, j).conj()));
        }
    }
    MetricJet::from_series(sym)
}

/// λ_jk = ∂_z^j ∂_z̄^k f / (j! k!) with ∂_z = ½(∂x − i∂y), ∂_z̄ = ½(∂x + i∂y).
fn complex_derivative(p: &[Vec<f64>], j: usize, k: usize) -> C64 {
    let n = j + k;
    // coefficient of X^a Y^(n−a) in (X − iY)^j (X + iY)^k
    let mut coef = vec![C64::new(0.0, 0.0); n + 1];
    for a1 in 0..=j {
        let c1 = binom(j, a1) * C64::new(0.0, -1.0).powu((j - a1) as u32);
        for a2 in 0..=k {
            let c2 = binom(k, a2) * C64::new(0.0, 1.0).powu((k - a2) as u32);
            coef[a1 + a2] += c1 * c2;
        }
    }
    let mut acc = C64::new(0.0, 0.0);
    for (a, c) in coef.iter().enumerate() {
        acc += c * p[a][n - a];
    }
    acc / (factorial(j) * factorial(k) * 2f64.powi(n as i32))
}

/// Jet of ln h at the base point: the analytic jet when the metric ships one (after a
/// finite-difference cross-check on the degrees ≤ 4), otherwise the numerical jet.
pub fn log_metric_jet(spec: &MetricSpec, order: usize, opts: &JetOptions) -> Result<MetricJet> {
    match spec.analytic_series(order) {
        Some(series) => {
            let jet = MetricJet::from_series(series)?;
            let fd_order = order.min(4);
            let fd = log_metric_jet_fd(spec, fd_order, opts)?;
            for j in 0..=fd_order {
                for k in 0..=(fd_order - j) {
                    let tol = opts.cross_check_tol[(j + k).clamp(2, 4) - 2] * (1.0 + jet.lambda(j, k).norm());
                    let d = (jet.lambda(j, k) - fd.lambda(j, k)).norm();
                    if d > tol {
                        return Err(SmfError::JetInconsistency(format!(
                            "analytic and numerical λ_{j}{k} differ by {d:e} (tolerance {tol:e})"
                        )));
                    }
                }
            }
            Ok(jet)
        }
        None => log_metric_jet_fd(spec, order, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::CatalogMetric;

    #[test]
    fn fornberg_classic_weights() {
        let nodes = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let w = fd_weights(0.0, &nodes, 2);
        let expect1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        let expect2 = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        for i in 0..5 {
            assert!((w[1][i] - expect1[i]).abs() < 1e-14);
            assert!((w[2][i] - expect2[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn numeric_jets_match_catalog_series() {
        for m in CatalogMetric::all_default() {
            let spec = MetricSpec::catalog(m);
            let fd = log_metric_jet_fd(&spec, 4, &JetOptions::default()).unwrap();
            let exact = m.series_at_origin(4);
            for j in 0..=4 {
                for k in 0..=(4 - j) {
                    let tol = [1e-10, 1e-10, 1e-10, 1e-8, 1e-6][j + k];
                    let d = (fd.lambda(j, k) - exact.get(j, k)).norm();
                    assert!(d < tol, "{m} λ_{j}{k}: {d:e}");
                }
            }
            assert!(fd.max_asymmetry() < 1e-10);
        }
    }

    #[test]
    fn sphere_jet_values() {
        let jet = log_metric_jet(&MetricSpec::catalog(CatalogMetric::Sphere), 4, &JetOptions::default()).unwrap();
        assert_eq!(jet.lambda(1, 0), C64::new(0.0, 0.0));
        assert_eq!(jet.lambda(1, 1), C64::new(-2.0, 0.0));
        assert_eq!(jet.lambda(2, 1), C64::new(0.0, 0.0));
        assert_eq!(jet.h0(), 1.0);
    }

    #[test]
    fn flat_and_exp_linear_jets() {
        let o = JetOptions::default();
        let flat = log_metric_jet_fd(&MetricSpec::catalog(CatalogMetric::Flat), 4, &o).unwrap();
        let expl = log_metric_jet_fd(&MetricSpec::catalog(CatalogMetric::ExpLinear), 4, &o).unwrap();
        for j in 0..=4 {
            for k in 0..=(4 - j) {
                assert!(flat.lambda(j, k).norm() < 1e-12);
                let want = if (j, k) == (1, 0) || (j, k) == (0, 1) { 1.0 } else { 0.0 };
                let tol = [1e-10, 1e-10, 1e-10, 1e-8, 1e-6][j + k];
                assert!((expl.lambda(j, k) - want).norm() < tol, "λ_{j}{k}");
            }
        }
    }

    #[test]
    fn closed_form_uses_numeric_path() {
        let spec = MetricSpec::closed_form("tilted", |z: C64| (0.3 * z.re - 0.1 * z.im + z.norm_sqr()).exp());
        let jet = log_metric_jet(&spec, 3, &JetOptions::default()).unwrap();
        assert!((jet.lambda(1, 0) - C64::new(0.15, 0.05)).norm() < 1e-10);
        assert!((jet.lambda(1, 1) - C64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn non_positive_metric_detected() {
        let spec = MetricSpec::closed_form("bad", |z: C64| z.re);
        assert!(matches!(
            log_metric_jet_fd(&spec, 3, &JetOptions::default()),
            Err(SmfError::NonPositiveMetric { .. })
        ));
    }
}
