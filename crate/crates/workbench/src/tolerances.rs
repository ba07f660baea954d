//! Thresholds of the acceptance criteria A1 to A9, and the desk-scale run sizes they use.

// A1: geometry identities
/// Reality of the extracted jet and the exact algebraic identities.
pub const JET_IDENTITY_TOL: f64 = 1e-10;
/// c = c₁ = −½K·h₀ passes through a finite-difference curvature.
pub const PHASE_CONSTANT_TOL: f64 = 1e-8;
/// |vanishing residual| below which a point counts as an intrinsic vanishing point.
pub const VANISHING_TOL: f64 = 1e-8;
/// |K| below which the curvature is reported as zero.
pub const ZERO_CURVATURE_TOL: f64 = 1e-8;
pub const SPHERE_CURVATURE: f64 = 4.0;
pub const HYPERBOLIC_CURVATURE: f64 = -1.0;

// A2: vanishing-point dichotomy
pub const ZERO_LOCATION_TOL: f64 = 1e-6;
pub const DICHOTOMY_RESOLUTION: usize = 24;

// A3: transformation invariance
pub const PUSHFORWARD_TOL: f64 = 1e-7;
pub const PUSHFORWARD_MAPS: usize = 100;

// A4: solver soundness
pub const FLAT_FREE_TOL: f64 = 1e-12;
pub const REVERSIBILITY_TOL: f64 = 1e-8;
pub const ORDER_TARGET: f64 = 4.0;
pub const ORDER_TOL: f64 = 0.3;
pub const DOUBLING_TOL: f64 = 1e-8;
pub const ENERGY_DRIFT_TOL: f64 = 1e-6;
pub const ENERGY_T_END: f64 = 100.0;

// A5: decay
pub const DECAY_TARGET: f64 = -0.5;
pub const DECAY_TOL: f64 = 0.1;
pub const GROWTH_MAX: f64 = 0.1;
pub const DECAY_WINDOW: (f64, f64) = (10.0, 200.0);
pub const FORWARD_EPSILON: f64 = 0.05;

// A6: modified scattering
pub const DYADIC_TIMES: [f64; 4] = [25.0, 50.0, 100.0, 200.0];
pub const FREQUENCY_MAJORITY: usize = 12;

// A7: final-state residual
pub const RESIDUAL_WINDOW: (f64, f64) = (20.0, 500.0);
pub const RESIDUAL_EXPONENT_RANGE: (f64, f64) = (-2.6, -2.2);
pub const RESIDUAL_SEPARATION: f64 = 0.3;
pub const RESIDUAL_SAMPLES: usize = 16;

// A8: wave operator
pub const WAVE_N: f64 = 200.0;
pub const WAVE_N0: f64 = 10.0;
pub const GAP_EXPONENT_MAX: f64 = -0.45;

// A9: property suite
pub const PROPERTY_CASES: usize = 64;
pub const Q_ODE_TOL: f64 = 1e-8;
pub const ROUND_TRIP_TOL: f64 = 1e-13;
