//! Criterion evaluators that turn measured data into pass/fail rows.

use crate::report::CriterionResult;
use crate::tolerances::*;
use serde::Serialize;
use smflow::diagnostics::{decay_fit, linear_fit, Column, DiagnosticSeries, FitResult};
use smflow::final_state::StabilityReport;
use smflow::Complex64 as C64;
use std::f64::consts::{PI, TAU};

fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

/// Long-time fits of the forward-run diagnostics (A5).
pub fn decay_checks(series: &DiagnosticSeries, window: (f64, f64)) -> (Vec<CriterionResult>, Vec<(String, Option<FitResult>)>) {
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut fit = |c: Column| {
        let f = decay_fit(series, c, window).ok();
        fits.push((c.name().to_string(), f));
        f
    };
    let w2 = fit(Column::W2Inf);
    rows.push(match &w2 {
        Some(f) => CriterionResult::new(
            "A5",
            "W^{2,inf} decay exponent",
            (f.exponent - DECAY_TARGET).abs() <= DECAY_TOL,
            format!("{:.4}", f.exponent),
            format!("{DECAY_TARGET} ± {DECAY_TOL}"),
        ),
        None => CriterionResult::new("A5", "W^{2,inf} decay exponent", false, "no fit", "fit over window"),
    });
    for (col, label) in [(Column::LwL2, "||Lw||_L2 growth exponent"), (Column::SzWeighted, "weighted ||Sz|| growth exponent")] {
        rows.push(match fit(col) {
            Some(f) => CriterionResult::new("A5", label, f.exponent <= GROWTH_MAX, format!("{:.4}", f.exponent), format!("<= {GROWTH_MAX}")),
            None => CriterionResult::new("A5", label, false, "no fit", "fit over window"),
        });
    }
    (rows, fits)
}

/// Dyadic differences |g(2T) − g(T)| at consecutive dyadic times.
pub fn dyadic_differences(series: &DiagnosticSeries, k: usize, big_f: bool) -> Option<Vec<f64>> {
    let mut values = Vec::new();
    for &t in &DYADIC_TIMES {
        let i = series.row_near(t)?;
        if (series.rows[i].t - t).abs() > 1e-6 * t {
            return None;
        }
        let s = series.tracked[i][k];
        values.push(if big_f { s.big_f } else { s.f_hat });
    }
    Some(values.windows(2).map(|p| (p[1] - p[0]).norm()).collect())
}

fn strictly_decreasing(d: &[f64]) -> bool {
    d.windows(2).all(|p| p[1] < p[0])
}

/// Slope of the unwrapped arg f̂ against ln t over rows with t ≥ t_min.
pub fn phase_slope(history: &[(f64, C64)], t_min: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = history.iter().filter(|p| p.0 >= t_min && p.1.norm() > 0.0).map(|p| (p.0.ln(), p.1.arg())).collect();
    if pts.len() < 2 {
        return None;
    }
    let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let mut y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    for i in 1..y.len() {
        let jump = y[i] - y[i - 1];
        y[i] -= TAU * ((jump + PI) / TAU).floor();
    }
    linear_fit(&x, &y).ok().map(|(s, _, _)| s)
}

#[derive(Debug, Clone, Serialize)]
pub struct FrequencyRecord {
    pub sigma: f64,
    pub dyadic_big_f: Option<Vec<f64>>,
    pub dyadic_f_hat: Option<Vec<f64>>,
    pub phase_slope: Option<f64>,
    pub predicted_slope: f64,
}

/// Per-frequency evidence for the scattering checks.
pub fn frequency_records(series: &DiagnosticSeries, t_min: f64) -> Vec<FrequencyRecord> {
    let last = series.rows.len() - 1;
    series
        .sigmas
        .iter()
        .enumerate()
        .map(|(k, &sigma)| {
            let f = series.tracked[last][k].f_hat;
            FrequencyRecord {
                sigma,
                dyadic_big_f: dyadic_differences(series, k, true),
                dyadic_f_hat: dyadic_differences(series, k, false),
                phase_slope: phase_slope(&series.history(k), t_min),
                // arg f̂ ≈ −Φ with dΦ/d ln t = c·σ²|f̂|²/2
                predicted_slope: -series.c_phase * sigma * sigma * f.norm_sqr() / 2.0,
            }
        })
        .collect()
}

/// Modified scattering (K ≠ 0): F̂ is Cauchy and arg f̂ drifts as predicted (A6).
pub fn modified_scattering_checks(records: &[FrequencyRecord]) -> Vec<CriterionResult> {
    let n = records.len();
    let cauchy = records.iter().filter(|r| r.dyadic_big_f.as_deref().is_some_and(strictly_decreasing)).count();
    let drift = records
        .iter()
        .filter(|r| r.phase_slope.is_some_and(|s| s != 0.0 && s.signum() == r.predicted_slope.signum()))
        .count();
    vec![
        CriterionResult::new(
            "A6",
            "phase-corrected profile dyadic differences decrease",
            cauchy >= FREQUENCY_MAJORITY,
            format!("{cauchy}/{n}"),
            format!(">= {FREQUENCY_MAJORITY}/{n}"),
        ),
        CriterionResult::new(
            "A6",
            "arg f̂ drift against ln t has the predicted sign",
            drift >= FREQUENCY_MAJORITY,
            format!("{drift}/{n}"),
            format!(">= {FREQUENCY_MAJORITY}/{n}"),
        ),
    ]
}

/// Plain scattering (K = 0): f̂ itself is Cauchy (A6).
pub fn plain_scattering_checks(records: &[FrequencyRecord]) -> Vec<CriterionResult> {
    let n = records.len();
    let cauchy = records.iter().filter(|r| r.dyadic_f_hat.as_deref().is_some_and(strictly_decreasing)).count();
    vec![CriterionResult::new(
        "A6",
        "K = 0: raw profile dyadic differences decrease",
        cauchy >= FREQUENCY_MAJORITY,
        format!("{cauchy}/{n}"),
        format!(">= {FREQUENCY_MAJORITY}/{n}"),
    )]
}

/// Residual exponent of the full profile and its separation from v₁ alone (A7).
pub fn residual_checks(full: Option<&FitResult>, v1_only: Option<&FitResult>) -> Vec<CriterionResult> {
    let (lo, hi) = RESIDUAL_EXPONENT_RANGE;
    let a = match full {
        Some(f) => CriterionResult::new(
            "A7",
            "L-inf residual exponent of v1+v2+v3+v4",
            f.exponent >= lo && f.exponent <= hi,
            format!("{:.4}", f.exponent),
            format!("in [{lo}, {hi}]"),
        ),
        None => CriterionResult::new("A7", "L-inf residual exponent of v1+v2+v3+v4", false, "no fit", "fit over window"),
    };
    let b = match (full, v1_only) {
        (Some(f), Some(g)) => CriterionResult::new(
            "A7",
            "corrections steepen the residual relative to v1 alone",
            g.exponent - f.exponent >= RESIDUAL_SEPARATION,
            format!("{:.4}", g.exponent - f.exponent),
            format!(">= {RESIDUAL_SEPARATION}"),
        ),
        _ => CriterionResult::new("A7", "corrections steepen the residual relative to v1 alone", false, "no fit", "both fits"),
    };
    vec![a, b]
}

/// Backward-run gap decay and two-horizon stability (A8).
pub fn wave_operator_checks(fit: Option<&FitResult>, shorter: &StabilityReport, longer: &StabilityReport) -> Vec<CriterionResult> {
    vec![
        match fit {
            Some(f) => CriterionResult::new(
                "A8",
                "||w - v||_L2 gap exponent",
                f.exponent <= GAP_EXPONENT_MAX,
                format!("{:.4}", f.exponent),
                format!("<= {GAP_EXPONENT_MAX}"),
            ),
            None => CriterionResult::new("A8", "||w - v||_L2 gap exponent", false, "no fit", "fit over [N0, N/4]"),
        },
        CriterionResult::new(
            "A8",
            "two-horizon sup gap decreases when N doubles",
            longer.sup_gap < shorter.sup_gap,
            format!("S({}) = {}, S({}) = {}", shorter.n, sci(shorter.sup_gap), longer.n, sci(longer.sup_gap)),
            "S(2N) < S(N)",
        ),
    ]
}
