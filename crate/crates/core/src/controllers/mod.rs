//! Online covariance controllers and their performance constants.

pub mod bounds;
mod dpp;
mod ogd;

pub use bounds::{theoretical_bounds, BoundReport, SystemConstants, Tuning};
pub use dpp::{dpp_step, DppState};
pub use ogd::{ogd_step, OgdState, StepPolicy};
