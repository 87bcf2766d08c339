//! Spectrum generating algebra of a free particle on S³.
//!
//! The crate builds the so(4,2) generators as explicit matrices on a
//! truncated space of harmonic polynomials, checks the closure relations,
//! restrictive tensors and Casimirs numerically, and integrates the
//! classical geodesic motion under Dirac brackets.

pub mod algebra;
pub mod classical;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod operators;
pub mod verify;

pub use error::{Error, Result};
