//! Conformal surface metrics h(z,z̄)|dz|², their jets, and the normal-form algebra.

mod catalog;
mod jet;
mod normal_form;
mod pushforward;
mod scan;
pub mod series;

pub use catalog::{CatalogMetric, CATALOG_NAMES};
pub use jet::{fd_weights, log_metric_jet, log_metric_jet_fd, JetOptions, MetricJet};
pub use normal_form::{
    curvature_at, extract_c_coefficients, forward_transform, forward_transform_with, intrinsic_vanishing_residual,
    inverse_transform, nu_coefficients, solve_gamma, NormalFormCoefficients,
};
pub use pushforward::{holomorphic_pushforward_check, pushforward_residual_fd, PushforwardCheck};
pub use scan::{scan_vanishing_points, Rect, ScanOptions, ScanReport, VanishingPoint};

use crate::error::{Result, SmfError};
use num_complex::Complex64 as C64;
use series::BiSeries;
use std::fmt;
use std::sync::Arc;

pub const DEFAULT_CHART_RADIUS: f64 = 0.3;
pub const DEFAULT_VANISH_TOL: f64 = 1e-8;

pub type ScalarField = Arc<dyn Fn(C64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum MetricKind {
    Catalog(CatalogMetric),
    /// User-supplied evaluator of h in absolute coordinates.
    ClosedForm { name: String, h: ScalarField },
    /// ln h is exactly the polynomial Σ λ_jk u^j ū^k in u = ζ − base point.
    ExplicitJet(MetricJet),
}

impl fmt::Debug for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Catalog(c) => write!(f, "Catalog({c})"),
            MetricKind::ClosedForm { name, .. } => write!(f, "ClosedForm({name})"),
            MetricKind::ExplicitJet(j) => write!(f, "ExplicitJet(order {})", j.order()),
        }
    }
}

/// A metric together with the chart point Q it is studied at.
#[derive(Debug, Clone)]
pub struct MetricSpec {
    pub kind: MetricKind,
    pub base_point: C64,
    pub chart_radius: f64,
}

impl MetricSpec {
    pub fn catalog(entry: CatalogMetric) -> Self {
        MetricSpec { kind: MetricKind::Catalog(entry), base_point: C64::new(0.0, 0.0), chart_radius: DEFAULT_CHART_RADIUS }
    }

    pub fn closed_form(name: impl Into<String>, h: impl Fn(C64) -> f64 + Send + Sync + 'static) -> Self {
        MetricSpec {
            kind: MetricKind::ClosedForm { name: name.into(), h: Arc::new(h) },
            base_point: C64::new(0.0, 0.0),
            chart_radius: DEFAULT_CHART_RADIUS,
        }
    }

    pub fn explicit_jet(jet: MetricJet) -> Self {
        MetricSpec { kind: MetricKind::ExplicitJet(jet), base_point: C64::new(0.0, 0.0), chart_radius: DEFAULT_CHART_RADIUS }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(Self::catalog(name.parse()?))
    }

    pub fn with_base_point(mut self, p: C64) -> Self {
        self.base_point = p;
        self
    }

    pub fn with_chart_radius(mut self, r: f64) -> Self {
        self.chart_radius = r;
        self
    }

    pub fn name(&self) -> String {
        match &self.kind {
            MetricKind::Catalog(c) => c.to_string(),
            MetricKind::ClosedForm { name, .. } => name.clone(),
            MetricKind::ExplicitJet(_) => "explicit-jet".to_string(),
        }
    }

    pub fn catalog_entry(&self) -> Option<CatalogMetric> {
        match self.kind {
            MetricKind::Catalog(c) => Some(c),
            _ => None,
        }
    }

    /// h at the absolute coordinate ζ.
    pub fn h(&self, zeta: C64) -> f64 {
        match &self.kind {
            MetricKind::Catalog(c) => c.h(zeta),
            MetricKind::ClosedForm { h, .. } => h(zeta),
            MetricKind::ExplicitJet(j) => {
                let u = zeta - self.base_point;
                j.series().eval(u, u.conj()).re.exp()
            }
        }
    }

    pub fn log_h(&self, zeta: C64) -> f64 {
        match &self.kind {
            MetricKind::Catalog(c) => c.log_h(zeta),
            MetricKind::ClosedForm { h, .. } => h(zeta).ln(),
            MetricKind::ExplicitJet(j) => {
                let u = zeta - self.base_point;
                j.series().eval(u, u.conj()).re
            }
        }
    }

    /// ∂_ζ ln h at the absolute coordinate ζ.
    pub fn dlog_h(&self, zeta: C64) -> C64 {
        match &self.kind {
            MetricKind::Catalog(c) => c.dlog_h(zeta),
            MetricKind::ExplicitJet(j) => {
                let u = zeta - self.base_point;
                let uc = u.conj();
                let s = j.series();
                let mut acc = C64::new(0.0, 0.0);
                for a in 1..=s.deg() {
                    for b in 0..=(s.deg() - a) {
                        acc += s.get(a, b) * (a as f64) * u.powu(a as u32 - 1) * uc.powu(b as u32);
                    }
                }
                acc
            }
            MetricKind::ClosedForm { h, .. } => {
                // fourth-order central differences of ln h, ∂ = ½(∂x − i∂y)
                let s = 1e-4 * zeta.norm().max(1.0);
                let f = |d: C64| h(zeta + d).ln();
                let d1 = |e: C64| (8.0 * (f(e) - f(-e)) - (f(2.0 * e) - f(-2.0 * e))) / (12.0 * s);
                let dx = d1(C64::new(s, 0.0));
                let dy = d1(C64::new(0.0, s));
                0.5 * C64::new(dx, -dy)
            }
        }
    }

    /// Exact Taylor coefficients of ln h at the base point when available.
    pub fn analytic_series(&self, order: usize) -> Option<BiSeries> {
        match &self.kind {
            MetricKind::Catalog(c) => {
                if self.base_point == C64::new(0.0, 0.0) {
                    Some(c.series_at_origin(order))
                } else if c.is_polynomial() {
                    Some(c.series_at_origin(4).shifted(self.base_point, order))
                } else {
                    None
                }
            }
            MetricKind::ExplicitJet(j) => {
                let s = j.series();
                let mut out = BiSeries::zero(order);
                for a in 0..=order.min(s.deg()) {
                    for b in 0..=(order.min(s.deg()) - a) {
                        out.set(a, b, s.get(a, b));
                    }
                }
                Some(out)
            }
            MetricKind::ClosedForm { .. } => None,
        }
    }

    /// Checks h > 0 on a polar sampling of the closed chart disk.
    pub fn check_positive(&self) -> Result<()> {
        for ir in 0..=16 {
            let r = self.chart_radius * ir as f64 / 16.0;
            for ia in 0..64 {
                let z = self.base_point + C64::from_polar(r, std::f64::consts::TAU * ia as f64 / 64.0);
                let v = self.h(z);
                if !(v > 0.0 && v.is_finite()) {
                    return Err(SmfError::NonPositiveMetric { re: z.re, im: z.im, value: v });
                }
            }
        }
        Ok(())
    }
}
