//! Numerical laboratory for one-dimensional Schrödinger map flows into surfaces with a
//! conformal metric h(z,z̄)|dz|².

// negated comparisons are used on purpose so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod diagnostics;
pub mod error;
pub mod final_state;
pub mod metric;
pub mod par;
pub mod spectral;
pub mod quadrature;

pub use error::{Result, SmfError};
pub use num_complex::Complex64;
