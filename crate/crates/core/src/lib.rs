//! Functional inequalities on the p-biased hypercube and on Gauss space,
//! evaluated exactly on truth tables.
//!
//! Points of `{-1, 1}^n` are `u64` indices: bit `j` set means coordinate `j`
//! is `+1`. Boolean functions read and print as `n:<dim> hex:<digits>`.

pub mod cube;
pub mod error;
pub mod gaussian;
pub mod hypercontract;
pub mod inequalities;
pub mod isoperimetry;
pub mod normal;
pub mod report;
pub mod sampling;
pub mod semigroup;

pub use cube::{BiasedMeasure, BooleanFunction, RealFunction};
pub use error::{Error, Result};
pub use report::{InequalityReport, Law, Tolerance};
