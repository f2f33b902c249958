//! Numerical companion to the second-moment analysis of squared Petersson
//! norms of twisted Poincaré series: Kloosterman sums, Bessel functions, the
//! Delta series, norm certificates, and both second moments computed along
//! their definitional and transformed routes.

pub mod arith;
pub mod bessel;
pub mod characters;
pub mod error;
pub mod kloosterman;
pub mod moments;
pub mod poincare;
pub mod quadrature;
pub mod smoothfn;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
