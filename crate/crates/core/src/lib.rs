//! Cohomology of finite multigraded exterior differential graded algebras
//! over prime fields.
//!
//! The crate builds the Koszul-type algebras `K(n, m)` and `E(n, m, ℓ)`,
//! computes their cohomology blockwise by multidegree, runs the spectral
//! sequences of filtrations by generator weight, checks cocycles in small
//! cobar complexes and solves the power-series recursion whose coefficients
//! predict total ranks.

pub mod catalog;
pub mod cobar;
pub mod cohomology;
pub mod conjecture;
pub mod dga;
pub mod error;
pub mod field;
pub mod golden;
pub mod json;
pub mod linalg;
pub mod pipeline;
pub mod spectral;

pub use error::{Error, Result};
