//! Exact tools for graph shift operators.
//!
//! The central question is whether every filter commuting with a shift `S` is
//! a polynomial in `S`. That holds exactly when `S` is shift-enabled (its
//! minimal and characteristic polynomials coincide). When it fails, the crate
//! produces a counterexample filter, can perturb `S` into a shift-enabled
//! matrix, and audits whether the result still describes the same graph.

pub mod catalog;
pub mod conversion;
pub mod corpus;
pub mod error;
pub mod exact;
pub mod io;
pub mod locality;
pub mod pattern;
pub mod real;
pub mod reproduction;
pub mod shift;
pub mod spectral;

pub use error::{Error, Result};
