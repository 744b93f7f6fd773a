//! Evaluation harness: structural Hamming distance, synthetic pair
//! generators, seeded experiments and a Monte-Carlo oracle for the
//! posterior-expected mutual information.
//!
//! Every experiment derives one seed per trial from the caller's seed, so a
//! report is a pure function of its arguments.

mod discovery;
mod experiments;
mod oracle;
mod report;
mod shd;
mod synth;

pub use discovery::run_discovery_bench;
pub use experiments::{
    polya_approx_error, run_mi_error_bench, run_polya_approx_bench, run_statistic_distribution_bench,
    run_type1_power_bench, run_variance_bench, MiEstimator, PolyaSpec, StatDistReport, StatDistRow, Type1Design,
    VarianceReport, VarianceRow,
};
pub use oracle::mc_mi_posterior_oracle;
pub use report::{BenchmarkReport, ConfigRecord, MeanStd};
pub use shd::shd;
pub use synth::{gen_synthetic_pair, true_mi, PairDesign, SyntheticPair, SyntheticPairSpec};

use causalci_core::bnmodel::BnError;
use causalci_core::citest::CiError;
use causalci_core::numstat::NumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Ci(#[from] CiError),
    #[error(transparent)]
    Bn(#[from] BnError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("{0}")]
    Invalid(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T, BenchError> {
    Err(BenchError::Invalid(msg.into()))
}
