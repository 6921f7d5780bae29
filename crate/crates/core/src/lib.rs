//! Exact and numerical computations for q-twisted tensor products of Cuntz
//! and Cuntz–Toeplitz algebras.

pub mod coeff;
pub mod cuntzq;
pub mod error;
pub mod fockrep;
pub mod kgroups;
pub mod rieffel;
pub mod symalg;
pub mod untwist;

pub use error::{Error, Result};
