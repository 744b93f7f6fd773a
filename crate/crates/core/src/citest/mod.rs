//! Marginal and conditional independence tests for discrete variables.
//!
//! Five methods share one decision type: plug-in mutual information,
//! empirical-Bayes mutual information, the G test, a Bayes-factor
//! threshold test, and the BF-chi2 test, which refers a likelihood ratio
//! built from Polya-approximating multinomial parameters to a chi-squared
//! distribution.

mod calibrate;
mod conditional;
mod mi;
mod stat;
mod table;
mod theta;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numstat::{AlphaBounds, NumError};

pub use calibrate::{calibrate_mi_threshold, mix as derive_seed, ThresholdCache};
pub use conditional::{conditional_test, conditional_test_with, global_cache, stratify, CiTest, DataCiTest, Strata};
pub use mi::{mi_eb, mi_eb_with, mi_mle, MiEbEstimate};
pub use stat::{bayes_factor, bf_threshold_test, g_test, ln_bayes_factor};
pub use table::ContingencyTable;
pub use theta::{bf_chi2_statistic, bf_chi2_test, solve_theta_tilde, ThetaTilde};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CiError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("invalid argument: {0}")]
    Invalid(String),
    /// The input carries no information for the requested quantity.
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
}

/// Independence test identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    /// Plug-in mutual information against a threshold.
    MiMle,
    /// Empirical-Bayes mutual information against a threshold.
    MiEb,
    /// G test (likelihood-ratio chi-squared).
    G,
    /// Bayes factor compared with `η`.
    BfThreshold,
    /// BF-chi2 statistic referred to chi-squared.
    BfChi2,
    /// d-separation in a known DAG; only meaningful for structure learning
    /// against a ground truth.
    DsepOracle,
}

impl CiMethod {
    /// The data-driven methods.
    pub const ALL: [CiMethod; 5] = [
        CiMethod::MiMle,
        CiMethod::MiEb,
        CiMethod::G,
        CiMethod::BfThreshold,
        CiMethod::BfChi2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CiMethod::MiMle => "mi_mle",
            CiMethod::MiEb => "mi_eb",
            CiMethod::G => "g",
            CiMethod::BfThreshold => "bf_threshold",
            CiMethod::BfChi2 => "bf_chi2",
            CiMethod::DsepOracle => "dsep_oracle",
        }
    }

    /// Whether the method reports a p-value.
    pub fn has_p_value(self) -> bool {
        matches!(self, CiMethod::G | CiMethod::BfChi2)
    }
}

impl fmt::Display for CiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CiMethod {
    type Err = CiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        match norm.as_str() {
            "mi_mle" | "mi" => Ok(CiMethod::MiMle),
            "mi_eb" => Ok(CiMethod::MiEb),
            "g" | "g_test" => Ok(CiMethod::G),
            "bf_threshold" | "bf" => Ok(CiMethod::BfThreshold),
            "bf_chi2" => Ok(CiMethod::BfChi2),
            "dsep_oracle" | "oracle" => Ok(CiMethod::DsepOracle),
            _ => Err(CiError::Invalid(format!("unknown method '{s}'"))),
        }
    }
}

/// How the MI tests obtain their decision threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MiThreshold {
    /// Declare independence iff MI is below this value.
    Fixed(f64),
    /// Simulated null quantile at level `significance`, computed per table
    /// shape and per-stratum sample size (see [`calibrate_mi_threshold`]).
    Calibrated { trials: usize, seed: u64 },
}

/// Hyperparameters fed to the BF-chi2 test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaPolicy {
    /// `alpha0` for both margins, `alpha1` for the joint table.
    Fixed,
    /// Per-margin and joint MAP estimates, falling back to the fixed values
    /// on degenerate counts.
    Map,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub significance: f64,
    /// Dirichlet concentration for each margin under independence.
    pub alpha0: f64,
    /// Dirichlet concentration for the joint table under dependence.
    pub alpha1: f64,
    /// Bayes-factor threshold `η`.
    pub bf_threshold: f64,
    pub mi_threshold: MiThreshold,
    pub alpha_policy: AlphaPolicy,
    pub alpha_bounds: AlphaBounds,
    pub max_cond_set: usize,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig {
            significance: 0.05,
            alpha0: 0.5,
            alpha1: 0.5,
            bf_threshold: 1.0,
            mi_threshold: MiThreshold::Calibrated { trials: 1000, seed: 0x6d69_5f65_625f_7468 },
            alpha_policy: AlphaPolicy::Fixed,
            alpha_bounds: AlphaBounds::default(),
            max_cond_set: 4,
        }
    }
}

impl TestConfig {
    pub fn validate(&self) -> Result<(), CiError> {
        let bad = |what: &str, v: f64| Err(CiError::Invalid(format!("{what} = {v}")));
        if !(self.significance > 0.0 && self.significance < 1.0) {
            return bad("significance", self.significance);
        }
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            return bad("alpha0", self.alpha0);
        }
        if !(self.alpha1 > 0.0 && self.alpha1.is_finite()) {
            return bad("alpha1", self.alpha1);
        }
        if !(self.bf_threshold > 0.0 && self.bf_threshold.is_finite()) {
            return bad("bf_threshold", self.bf_threshold);
        }
        match self.mi_threshold {
            MiThreshold::Fixed(t) if !(t >= 0.0 && t.is_finite()) => bad("mi_threshold", t),
            MiThreshold::Calibrated { trials, .. } if trials < 100 => bad("calibration trials", trials as f64),
            _ => Ok(()),
        }
    }
}

/// Outcome of one independence test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiDecision<T = f64> {
    /// MI value, G, Bayes factor or BF-chi2, depending on `method`.
    pub statistic: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub df: Option<u64>,
    pub independent: bool,
    pub method: CiMethod,
    pub strata_used: usize,
    /// No usable information (empty data or a constant variable); the
    /// verdict is the method's default.
    pub degenerate: bool,
}
