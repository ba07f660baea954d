use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmfError {
    #[error("metric is not positive: h({re}, {im}) = {value}")]
    NonPositiveMetric { re: f64, im: f64, value: f64 },

    #[error("jet inconsistency: {0}")]
    JetInconsistency(String),

    #[error("curvature is not real: Im lambda_11 = {0:e}")]
    NonRealCurvature(f64),

    #[error("Newton iteration did not converge for sample {index} (|w| = {modulus})")]
    NewtonDivergence { index: usize, modulus: f64 },

    #[error("degenerate holomorphic map: |f'(0)| = {0:e}")]
    DegenerateMap(f64),

    #[error("chart exit at t = {t}: max|z| = {max_modulus} exceeds chart radius {radius}")]
    ChartExit { t: f64, max_modulus: f64, radius: f64 },

    #[error("non-finite value detected at t = {t}; retry with dt = {suggested_dt}")]
    NaNDetected { t: f64, suggested_dt: f64 },

    #[error("boundary mass fraction {fraction:e} at t = {t} exceeds {tolerance:e}")]
    BoundaryMass { t: f64, fraction: f64, tolerance: f64 },

    #[error("insufficient sampling of the phase integrand at t = {t} (jump {jump:e})")]
    InsufficientSampling { t: f64, jump: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("quadrature failed to reach {tolerance:e} on [{a}, {b}] (estimate {estimate:e})")]
    QuadratureFailure { a: f64, b: f64, tolerance: f64, estimate: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("profile weighted norm {norm:e} exceeds the configured bound {bound:e}")]
    ProfileTooLarge { norm: f64, bound: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SmfError {
    fn from(e: std::io::Error) -> Self {
        SmfError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SmfError>;
