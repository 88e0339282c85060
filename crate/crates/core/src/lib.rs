//! Exact matrix models for bow varieties.
//!
//! The crate computes over the rationals. Modules:
//!
//! - [`exact`]: rationals, polynomials, truncated Laurent series, matrices,
//!   invariant factors
//! - [`shapes`]: the block shapes `U_mu`, `f_mu`, `S_mu` and the level set `P`
//! - [`normalizer`]: conjugating a level-set matrix into the slice
//! - [`mvy`]: the Mirkovic-Vybornov correspondence between the transversal
//!   `W_mu` and the slice `S_mu`
//! - [`combinatorics`]: margins, {0,1} fixed points, dimension chains
//! - [`cores`]: two-row signatures, cores, weights and graded dimensions
//! - [`json`]: the shared JSON encodings

pub mod error;
pub mod combinatorics;
pub mod cores;
pub mod exact;
pub mod json;
pub mod mvy;
pub mod normalizer;
pub mod shapes;

pub use error::{Error, Result};
