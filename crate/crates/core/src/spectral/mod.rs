//! Periodic pseudo-spectral integration of the chart equation and of the normal-form model.

mod checkpoint;
mod grid;
mod solver;
mod state;

pub use checkpoint::{read_checkpoint, write_checkpoint, Precision};
pub use grid::{GridSpec, Spectral};
pub use solver::{
    evolve, evolve_reduced, free_evolution, nonlinear_rhs, Direction, Integrator, Nonlinearity, Solver, SolverConfig,
};
pub use state::{FieldState, InitialData};
