//! Norms, conserved and almost-conserved functionals, Fourier profiles and fits.

pub mod asymptotics;
pub mod fit;
pub mod functionals;
pub mod profile;
pub mod series;

pub use asymptotics::{
    asymptotic_compare, classify, extract_psi, main_term, rigidity_observables, rigidity_probe, rigidity_report,
    GrowthClass, RigidityReport, GROWTH_THRESHOLD,
};
pub use fit::{linear_fit, power_law_fit, FitResult, MIN_FIT_ROWS};
pub use functionals::{apply_l, apply_s, energy, l2, l_functional, linf, mass_functional, sobolev, w2inf};
pub use profile::{
    default_sigmas, fourier_profile, log_spaced, phase_corrected_profile, profile_at, transform_at, PhaseAccumulator,
    SampledProfile, DEFAULT_PHASE_TOL,
};
pub use series::{
    decay_fit, record_run, Column, DiagnosticRow, DiagnosticSeries, Recorder, RecorderConfig, TrackedSample,
};
