#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod controllers;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod rate_adapt;
pub mod solvers;

pub use error::{Error, Result};
pub mod validate;
