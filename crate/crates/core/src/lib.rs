//! Certified high-precision checks of digamma and polygamma inequalities.
//!
//! The crate evaluates `ψ`, `ψ⁽ⁿ⁾` and their inverses as rigorous enclosures
//! ([`ApproxReal`]), computes logarithmic and generalized logarithmic means,
//! encodes a catalog of two-sided bounds, sweeps them over grids, and searches
//! for the best shift constants in `x ↦ ψ⁽ⁿ⁾(x + c)`-type estimates.

pub mod approx;
pub mod catalog;
pub mod cli;
pub mod engine;
pub mod error;
pub mod means;
pub mod search;
pub mod verifier;

pub use approx::ApproxReal;
pub use engine::{Engine, PrecisionConfig};
pub use error::{Error, Result};
