use crate::error::{Result, SmfError};

pub const MIN_FIT_ROWS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

impl FitResult {
    pub fn predict(&self, t: f64) -> f64 {
        (self.intercept + self.exponent * t.ln()).exp()
    }
}

/// Ordinary least squares y = a + b·x; returns (b, a, r²).
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if !(sxx > 1e-300) {
        return Err(SmfError::DegenerateFit("abscissa has zero variance".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - ssr / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok((slope, icpt, r2))
}

/// Log-log least squares of (t, value) pairs restricted to t ∈ [t_min, t_max].
pub fn power_law_fit(points: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let sel: Vec<&(f64, f64)> = points.iter().filter(|(t, _)| *t >= window.0 && *t <= window.1).collect();
    if sel.len() < MIN_FIT_ROWS {
        return Err(SmfError::DegenerateFit(format!(
            "{} rows in window [{}, {}], need at least {MIN_FIT_ROWS}",
            sel.len(),
            window.0,
            window.1
        )));
    }
    if let Some((t, v)) = sel.iter().find(|(t, v)| !(*v > 0.0) || !(*t > 0.0)) {
        return Err(SmfError::DegenerateFit(format!("non-positive sample {v} at t = {t}")));
    }
    let x: Vec<f64> = sel.iter().map(|(t, _)| t.ln()).collect();
    let y: Vec<f64> = sel.iter().map(|(_, v)| v.ln()).collect();
    let (exponent, intercept, r_squared) = linear_fit(&x, &y)?;
    Ok(FitResult { exponent, intercept, r_squared, window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::profile::log_spaced;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = log_spaced(1.0, 100.0, 30).into_iter().map(|t| (t, 3.0 * t.powf(-0.5))).collect();
        let f = power_law_fit(&pts, (1.0, 100.0)).unwrap();
        assert!((f.exponent + 0.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(f.r_squared > 0.999);
    }

    #[test]
    fn too_few_rows() {
        let pts: Vec<(f64, f64)> = (1..=9).map(|k| (k as f64, 1.0)).collect();
        assert!(matches!(power_law_fit(&pts, (0.0, 10.0)), Err(SmfError::DegenerateFit(_))));
    }

    #[test]
    fn zero_variance() {
        let pts: Vec<(f64, f64)> = (0..12).map(|_| (2.0, 1.0)).collect();
        assert!(matches!(power_law_fit(&pts, (0.0, 10.0)), Err(SmfError::DegenerateFit(_))));
    }

    #[test]
    fn nonpositive_value() {
        let mut pts: Vec<(f64, f64)> = (1..=12).map(|k| (k as f64, 1.0)).collect();
        pts[4].1 = 0.0;
        assert!(power_law_fit(&pts, (0.0, 20.0)).is_err());
    }
}
