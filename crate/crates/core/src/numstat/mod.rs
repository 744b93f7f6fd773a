//! Special functions, chi-squared tails, Dirichlet sampling and the
//! Polya (Dirichlet-multinomial) likelihood with its symmetric
//! hyperparameter estimate.

mod chi2;
mod dirichlet;
mod polya;
mod special;

pub use chi2::{chi2_cdf, chi2_sf, regularized_gamma_p, regularized_gamma_q};
pub use dirichlet::{dirichlet_sample, dirichlet_sample_with, multinomial_sample_with};
pub use polya::{
    estimate_alpha_map, estimate_alpha_map_with, log_polya, AlphaBounds, AlphaEstimate,
    AlphaSource, CountSeq,
};
pub use special::{digamma, ln_gamma, ln_rising};

use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    /// An argument lies outside the function's domain.
    #[error("{func}: argument {value} outside domain ({expected})")]
    Domain {
        func: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// The input carries no information for the requested estimate
    /// (for example an empty count sequence). Callers fall back to a default.
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
}

impl NumError {
    pub(crate) fn domain<T: num_traits::ToPrimitive>(
        func: &'static str,
        value: T,
        expected: &'static str,
    ) -> Self {
        NumError::Domain {
            func,
            value: value.to_f64().unwrap_or(f64::NAN),
            expected,
        }
    }
}
