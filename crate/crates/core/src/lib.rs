//! Curvature and null-distribution analysis for neutral-signature metrics in
//! Walker coordinates `(u, v, x, y)`.

// index loops read like the tensor formulas they implement; Expr builders are not operators
#![allow(clippy::needless_range_loop, clippy::should_implement_trait, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exprkit;
pub mod tensor;
pub mod frames;
pub mod weylalg;
pub mod families;
pub mod lab;

pub use error::{Error, Result};
