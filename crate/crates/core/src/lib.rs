//! Helicoidal and catenoidal minimal surfaces in the universal cover of the
//! Euclidean motion group with a left-invariant metric `g(λ1, λ2)`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catenoid;
pub mod cli;
pub mod e2;
pub mod error;
pub mod helicoid;
pub mod numerics;
pub mod surface;
pub mod weierstrass;

pub use e2::{CoordVector, Frame, FrameVector, GroupElement, MetricParams};
pub use error::{Error, Result};
pub use numerics::Tolerances;
