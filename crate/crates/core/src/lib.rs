//! Exact symbolic engine for Drinfel'd twists on enveloping algebras of
//! affine vector fields, the star products they induce on the differential
//! calculus algebra of R^n, and twisted geometry on quadric submanifolds.
//!
//! Everything is exact: coefficients live in [`scalar::Scalar`], a ring of
//! Gaussian-rational polynomials in the deformation parameter `nu`, two
//! formal surds and the family parameter `c`.

// index loops mirror the tensor index notation
#![allow(clippy::needless_range_loop)]

pub mod calculus;
pub mod config;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod hopf;
pub mod report;
pub mod scalar;
pub mod star;
pub mod submanifold;
pub mod twist;

pub use calculus::{CalcElement, Frame, Monomial};
pub use error::{Error, Result};
pub use hopf::{LieAlgebra, Uea, UeaTensor};
pub use scalar::{Scalar, Surds};
pub use star::{Mode, StarContext};
pub use twist::TwistSeries;
