//! Approximate final-state solutions, their residuals, and backward wave-operator runs.

pub mod profile;
pub mod psi;
pub mod wave;

pub use profile::{
    residual, residual_grid, residual_samples, v1_residual_exact, Ablation, CorrectionForm, FinalStateProfile, Part,
    ResidualNorms,
};
pub use psi::{m_theta_margin, Psi, DEFAULT_EPS_STAR, DEFAULT_M};
pub use wave::{
    backward_run, compare_runs, two_run_stability, wave_operator_experiment, StabilityReport, WaveOperatorConfig,
    WaveOperatorRun,
};
