//! Numerical laboratory for the planar isoperimetric problem with a radial
//! log-convex density.

// `!(x > 0.0)` style guards reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bvp;
pub mod cli;
pub mod config;
pub mod density;
pub mod dist;
pub mod error;
pub mod geometry;
pub mod isoperimetry;
pub mod kernel;
pub mod means;
pub mod quad;
pub mod random;
pub mod report;
pub mod suites;

pub use density::{eval_rho, Density, Family, RhoFunction, RhoRepr, Side, Source};
pub use error::{Error, Result};
pub use kernel::{build_kernel, RadialKernel, DEFAULT_EPS};
