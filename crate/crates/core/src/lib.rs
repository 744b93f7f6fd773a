//! Conditional independence tests for discrete data that borrow strength
//! from a Dirichlet prior, and PC-stable structure learning built on them.
//!
//! The numerical routines are generic over [`Scalar`] (`f32` or `f64`);
//! the aliases below fix the precision used by the rest of the crate.

pub mod bnmodel;
pub mod citest;
pub mod discovery;
pub mod numstat;
pub mod scalar;

pub use scalar::Scalar;

/// Default real type.
pub type Real = f64;
/// Polya concentration estimate in double precision.
pub type AlphaEstimateF64 = numstat::AlphaEstimate<f64>;
/// Polya concentration estimate in single precision.
pub type AlphaEstimateF32 = numstat::AlphaEstimate<f32>;
