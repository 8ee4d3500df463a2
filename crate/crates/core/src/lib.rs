// NaN-rejecting checks are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod completeness;
pub mod error;
pub mod geometry;
pub mod inner;
pub mod models;
pub mod moment;
pub mod numerics;
pub mod vdt;

pub use error::{Error, Result};
pub use num_complex::Complex64;
