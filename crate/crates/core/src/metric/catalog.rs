use super::series::BiSeries;
use crate::error::{Result, SmfError};
use num_complex::Complex64 as C64;
use std::fmt;
use std::str::FromStr;

/// Named metrics addressable from the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogMetric {
    /// h = (1+|z|²)^{-2}
    Sphere,
    /// h = 4(1−|z|²)^{-2}
    Hyperbolic,
    Flat,
    /// h = e^{z+z̄}
    ExpLinear,
    /// ln h = c1(z+z̄) + c2(z²+z̄²) + c3(z³+z̄³) + c4|z|⁴
    Remark11 { c1: f64, c2: f64, c3: f64, c4: f64 },
    /// ln h = z + z̄ + a|z|²
    NonvanishingA { a: f64 },
    /// ln h = z²z̄ + z̄²z
    C5Nonzero,
}

pub const CATALOG_NAMES: [&str; 7] =
    ["sphere", "hyperbolic", "flat", "exp-linear", "remark11:c1,c2,c3,c4", "nonvanishing-a:a", "c5-nonzero"];

impl CatalogMetric {
    pub fn all_default() -> Vec<CatalogMetric> {
        vec![
            CatalogMetric::Sphere,
            CatalogMetric::Hyperbolic,
            CatalogMetric::Flat,
            CatalogMetric::ExpLinear,
            CatalogMetric::Remark11 { c1: 0.5, c2: 0.0, c3: 0.0, c4: 0.25 },
            CatalogMetric::NonvanishingA { a: 0.5 },
            CatalogMetric::C5Nonzero,
        ]
    }

    pub fn log_h(&self, z: C64) -> f64 {
        let r2 = z.norm_sqr();
        match *self {
            CatalogMetric::Sphere => -2.0 * r2.ln_1p(),
            CatalogMetric::Hyperbolic => 4f64.ln() - 2.0 * (-r2).ln_1p(),
            CatalogMetric::Flat => 0.0,
            CatalogMetric::ExpLinear => 2.0 * z.re,
            CatalogMetric::Remark11 { c1, c2, c3, c4 } => {
                2.0 * (c1 * z.re + c2 * (z * z).re + c3 * z.powu(3).re) + c4 * r2 * r2
            }
            CatalogMetric::NonvanishingA { a } => 2.0 * z.re + a * r2,
            CatalogMetric::C5Nonzero => 2.0 * r2 * z.re,
        }
    }

    pub fn h(&self, z: C64) -> f64 {
        match *self {
            CatalogMetric::Sphere => (1.0 + z.norm_sqr()).powi(-2),
            CatalogMetric::Hyperbolic => {
                let d = 1.0 - z.norm_sqr();
                if d <= 0.0 {
                    f64::NAN
                } else {
                    4.0 / (d * d)
                }
            }
            CatalogMetric::Flat => 1.0,
            _ => self.log_h(z).exp(),
        }
    }

    /// ∂_z ln h.
    pub fn dlog_h(&self, z: C64) -> C64 {
        let zc = z.conj();
        let r2 = z.norm_sqr();
        match *self {
            CatalogMetric::Sphere => -2.0 * zc / (1.0 + r2),
            CatalogMetric::Hyperbolic => 2.0 * zc / (1.0 - r2),
            CatalogMetric::Flat => C64::new(0.0, 0.0),
            CatalogMetric::ExpLinear => C64::new(1.0, 0.0),
            CatalogMetric::Remark11 { c1, c2, c3, c4 } => {
                c1 + 2.0 * c2 * z + 3.0 * c3 * z * z + 2.0 * c4 * z * zc * zc
            }
            CatalogMetric::NonvanishingA { a } => 1.0 + a * zc,
            CatalogMetric::C5Nonzero => 2.0 * r2 + zc * zc,
        }
    }

    /// Exact Taylor coefficients of ln h at 0, up to total degree `order`.
    pub fn series_at_origin(&self, order: usize) -> BiSeries {
        let mut s = BiSeries::zero(order);
        let mut put = |j: usize, k: usize, v: f64| {
            if j + k <= order && v != 0.0 {
                s.set(j, k, C64::new(v, 0.0));
            }
        };
        match *self {
            CatalogMetric::Sphere => {
                for m in 1..=order / 2 {
                    put(m, m, 2.0 * (-1f64).powi(m as i32) / m as f64);
                }
            }
            CatalogMetric::Hyperbolic => {
                put(0, 0, 4f64.ln());
                for m in 1..=order / 2 {
                    put(m, m, 2.0 / m as f64);
                }
            }
            CatalogMetric::Flat => {}
            CatalogMetric::ExpLinear => {
                put(1, 0, 1.0);
                put(0, 1, 1.0);
            }
            CatalogMetric::Remark11 { c1, c2, c3, c4 } => {
                put(1, 0, c1);
                put(0, 1, c1);
                put(2, 0, c2);
                put(0, 2, c2);
                put(3, 0, c3);
                put(0, 3, c3);
                put(2, 2, c4);
            }
            CatalogMetric::NonvanishingA { a } => {
                put(1, 0, 1.0);
                put(0, 1, 1.0);
                put(1, 1, a);
            }
            CatalogMetric::C5Nonzero => {
                put(2, 1, 1.0);
                put(1, 2, 1.0);
            }
        }
        s
    }

    /// True when ln h is a polynomial of degree ≤ 4, so that re-expansion at any point is exact.
    pub fn is_polynomial(&self) -> bool {
        !matches!(self, CatalogMetric::Sphere | CatalogMetric::Hyperbolic)
    }
}

impl fmt::Display for CatalogMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CatalogMetric::Sphere => write!(f, "sphere"),
            CatalogMetric::Hyperbolic => write!(f, "hyperbolic"),
            CatalogMetric::Flat => write!(f, "flat"),
            CatalogMetric::ExpLinear => write!(f, "exp-linear"),
            CatalogMetric::Remark11 { c1, c2, c3, c4 } => write!(f, "remark11:{c1},{c2},{c3},{c4}"),
            CatalogMetric::NonvanishingA { a } => write!(f, "nonvanishing-a:{a}"),
            CatalogMetric::C5Nonzero => write!(f, "c5-nonzero"),
        }
    }
}

fn parse_params(name: &str, raw: &str, expected: usize) -> Result<Vec<f64>> {
    let vals: std::result::Result<Vec<f64>, _> = raw.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match vals {
        Ok(v) if v.len() == expected && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(SmfError::InvalidInput(format!(
            "metric '{name}' expects {expected} comma-separated finite numbers, got '{raw}'"
        ))),
    }
}

impl FromStr for CatalogMetric {
    type Err = SmfError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let no_params = |m: CatalogMetric| match params {
            None => Ok(m),
            Some(_) => Err(SmfError::InvalidInput(format!("metric '{name}' takes no parameters"))),
        };
        match name {
            "sphere" => no_params(CatalogMetric::Sphere),
            "hyperbolic" => no_params(CatalogMetric::Hyperbolic),
            "flat" => no_params(CatalogMetric::Flat),
            "exp-linear" => no_params(CatalogMetric::ExpLinear),
            "c5-nonzero" => no_params(CatalogMetric::C5Nonzero),
            "remark11" => {
                let p = parse_params(name, params.unwrap_or(""), 4)?;
                Ok(CatalogMetric::Remark11 { c1: p[0], c2: p[1], c3: p[2], c4: p[3] })
            }
            "nonvanishing-a" => {
                let p = parse_params(name, params.unwrap_or(""), 1)?;
                Ok(CatalogMetric::NonvanishingA { a: p[0] })
            }
            other => Err(SmfError::InvalidInput(format!(
                "unknown metric '{other}' (known: {})",
                CATALOG_NAMES.join(", ")
            ))),
        }
    }
}
