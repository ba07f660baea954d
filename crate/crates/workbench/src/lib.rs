//! Configuration, experiment orchestration, reports and the acceptance suite.

// negated comparisons are used on purpose so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod checks;
pub mod config;
pub mod error;
pub mod experiments;
pub mod report;
pub mod tolerances;
