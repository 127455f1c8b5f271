//! Elliptic generalized cotangent Dirichlet series and the elliptic
//! Dedekind-Rademacher sums attached to them.
//!
//! Every evaluator is generic over [`numeric::Real`], implemented for `f64`
//! and for the double-double type [`numeric::DoubleDouble`]. The mode used by
//! the drivers in [`verify`] is picked once per process, see
//! [`numeric::precision`].

pub mod classical;
pub mod ellsums;
pub mod error;
pub mod modular;
pub mod numeric;
pub mod quadratic;
pub mod series;
pub mod thetakron;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::{Complex, ComplexValue, DoubleDouble, Real, SeriesResult, TruncationPolicy};
