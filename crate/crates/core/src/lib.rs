//! Intrinsic geometry of left-invariant Lorentz metrics on low-dimensional
//! matrix Lie groups, Iwasawa factorizations of SL(n,ℝ), and the explicit
//! maps relating the Gödel space-time to SL(2,ℝ).

pub mod error;
pub mod geodesic;
pub mod goedel;
pub mod group;
pub mod iwasawa;
pub mod lie;
pub mod metric;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
