use super::jet::{log_metric_jet_fd, JetOptions, MetricJet};
use super::normal_form::intrinsic_vanishing_residual;
use super::series::BiSeries;
use super::MetricSpec;
use crate::error::{Result, SmfError};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PushforwardCheck {
    /// Vanishing residual of the pulled-back metric h(f(z))|f'(z)|² at 0.
    pub lhs: C64,
    /// conj(f'(0))·f'(0)²·(vanishing residual of h at 0).
    pub rhs: C64,
}

impl PushforwardCheck {
    pub fn defect(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

fn check_map(f: &[C64]) -> Result<()> {
    if f.is_empty() || f.len() > 4 {
        return Err(SmfError::InvalidInput(format!("map must have degree 1..=4, got {} coefficients", f.len())));
    }
    if f[0].norm() < 1e-10 {
        return Err(SmfError::DegenerateMap(f[0].norm()));
    }
    Ok(())
}

/// Compares both sides of the transformation law for the vanishing residual under
/// z ↦ f(z) = Σ f[i−1] zⁱ. The left side is obtained by composing truncated series in
/// (z, z̄): ln h̃ = ln h(f, f̄) + ln f' + conj(ln f').
pub fn holomorphic_pushforward_check(jet: &MetricJet, f: &[C64]) -> Result<PushforwardCheck> {
    check_map(f)?;
    if jet.order() < 3 {
        return Err(SmfError::InvalidInput("pushforward check needs a jet of order ≥ 3".into()));
    }
    const D: usize = 3;
    let mut fc = vec![C64::new(0.0, 0.0)];
    fc.extend_from_slice(f);
    let conj_fc: Vec<C64> = fc.iter().map(|x| x.conj()).collect();
    let big_f = BiSeries::univariate(D, &fc, true);
    let big_g = BiSeries::univariate(D, &conj_fc, false);

    let fpow: Vec<BiSeries> = (0..=D).map(|j| big_f.pow(j)).collect();
    let gpow: Vec<BiSeries> = (0..=D).map(|k| big_g.pow(k)).collect();
    let mut pulled = BiSeries::zero(D);
    for j in 0..=D {
        for k in 0..=(D - j) {
            let l = jet.lambda(j, k);
            if l != C64::new(0.0, 0.0) {
                pulled = pulled.add(&fpow[j].mul(&gpow[k]).scale(l));
            }
        }
    }

    // ln f'(u) = ln a1 + log1p(q), q = (f' − a1)/a1
    let a1 = f[0];
    let mut qc = vec![C64::new(0.0, 0.0); D + 1];
    for (i, &a) in f.iter().enumerate().skip(1) {
        if i <= D {
            qc[i] = a * (i as f64 + 1.0) / a1;
        }
    }
    let q = BiSeries::univariate(D, &qc, true);
    let mut log_fp = BiSeries::constant(D, a1.ln());
    let mut qp = BiSeries::constant(D, C64::new(1.0, 0.0));
    for m in 1..=D {
        qp = qp.mul(&q);
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        log_fp = log_fp.add(&qp.scale(C64::new(sign / m as f64, 0.0)));
    }
    let mut log_fp_bar = BiSeries::zero(D);
    for i in 0..=D {
        log_fp_bar.set(0, i, log_fp.get(i, 0).conj());
    }
    let total = pulled.add(&log_fp).add(&log_fp_bar);

    let lhs = total.get(1, 0) * total.get(1, 1) - 2.0 * total.get(2, 1);
    let rhs = a1.conj() * a1 * a1 * intrinsic_vanishing_residual(jet);
    Ok(PushforwardCheck { lhs, rhs })
}

/// Independent route: numerical jet of the pulled-back metric h(Q + f(z))|f'(z)|².
pub fn pushforward_residual_fd(spec: &MetricSpec, f: &[C64]) -> Result<C64> {
    check_map(f)?;
    let coeffs = f.to_vec();
    let base = spec.base_point;
    let inner = spec.clone();
    let pulled = MetricSpec::closed_form("pullback", move |z: C64| {
        let mut fz = C64::new(0.0, 0.0);
        let mut dfz = C64::new(0.0, 0.0);
        for (i, &a) in coeffs.iter().enumerate() {
            fz += a * z.powu(i as u32 + 1);
            dfz += a * (i as f64 + 1.0) * z.powu(i as u32);
        }
        inner.h(base + fz) * dfz.norm_sqr()
    });
    let jet = log_metric_jet_fd(&pulled, 3, &JetOptions::default())?;
    Ok(intrinsic_vanishing_residual(&jet))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{log_metric_jet, CatalogMetric};

    fn jet(m: CatalogMetric) -> MetricJet {
        log_metric_jet(&MetricSpec::catalog(m), 4, &JetOptions::default()).unwrap()
    }

    #[test]
    fn identity_map() {
        let j = jet(CatalogMetric::NonvanishingA { a: 0.5 });
        let r = holomorphic_pushforward_check(&j, &[C64::new(1.0, 0.0)]).unwrap();
        assert!((r.lhs - r.rhs).norm() < 1e-15);
        assert!((r.lhs - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn scaling_of_sphere() {
        let r = holomorphic_pushforward_check(&jet(CatalogMetric::Sphere), &[C64::new(2.0, 0.0)]).unwrap();
        assert!(r.lhs.norm() < 1e-14 && r.rhs.norm() < 1e-14);
    }

    #[test]
    fn quadratic_map_against_numeric_jet() {
        let a = 0.5;
        let m = CatalogMetric::NonvanishingA { a };
        let f = [C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        let r = holomorphic_pushforward_check(&jet(m), &f).unwrap();
        assert!((r.rhs - C64::new(a, 0.0)).norm() < 1e-14);
        assert!(r.defect() < 1e-12);
        let fd = pushforward_residual_fd(&MetricSpec::catalog(m), &f).unwrap();
        assert!((fd - r.rhs).norm() < 1e-7, "{fd}");
    }

    #[test]
    fn degenerate_map_rejected() {
        let j = jet(CatalogMetric::Sphere);
        assert!(matches!(
            holomorphic_pushforward_check(&j, &[C64::new(1e-12, 0.0), C64::new(1.0, 0.0)]),
            Err(SmfError::DegenerateMap(_))
        ));
    }
}
