//! Multinomial approximation of the Polya likelihood and the BF-chi2 test.

use serde::{Deserialize, Serialize};

use crate::citest::stat::{chi2_decision, table_df};
use crate::citest::{AlphaPolicy, CiDecision, CiError, CiMethod, ContingencyTable, TestConfig};
use crate::numstat::{estimate_alpha_map_with, ln_rising, CountSeq, NumError};
use crate::scalar::Scalar;

/// Multinomial parameters `θ̃_k ∝ a·n_k + b·α` whose likelihood tracks the
/// Polya likelihood of the counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaTilde<T = f64> {
    pub values: Vec<T>,
    pub a: T,
    pub b: T,
    /// The least-squares fit was singular or produced a non-positive
    /// component; `values` are the posterior means `(n_k+α)/(N+Kα)`,
    /// i.e. `a = b = 1`.
    pub fallback: bool,
}

/// Fits `g(n, α) = a·n + b·α` to `t(n_k, α) = exp(ln(Γ(n_k+α)/Γ(α)) / n_k)`
/// by least squares over the states with `n_k > 0`, then normalizes.
pub fn solve_theta_tilde<T: Scalar>(counts: &CountSeq, alpha: T) -> Result<ThetaTilde<T>, CiError> {
    if !(alpha > T::zero() && alpha.is_finite()) {
        return Err(NumError::domain("solve_theta_tilde", alpha, "alpha > 0").into());
    }
    if counts.total() == 0 {
        return Err(CiError::Degenerate("no observations"));
    }
    let nz: Vec<u64> = counts.counts().iter().copied().filter(|&n| n > 0).collect();
    let m = nz.len() as u128;
    let s1: u128 = nz.iter().map(|&n| n as u128).sum();
    let s2: u128 = nz.iter().map(|&n| (n as u128) * (n as u128)).sum();
    // Exact rank test: m·Σn² = (Σn)² iff all retained counts are equal.
    if m * s2 == s1 * s1 {
        return Ok(fallback(counts, alpha));
    }
    let (mut st, mut snt) = (T::zero(), T::zero());
    for &n in &nz {
        let nf = T::from_count(n);
        let t = (ln_rising(alpha, n)? / nf).exp();
        st += t;
        snt += nf * t;
    }
    let mf = T::from_u128(m).unwrap();
    let s1f = T::from_u128(s1).unwrap();
    let s2f = T::from_u128(s2).unwrap();
    let det = alpha * alpha * (mf * s2f - s1f * s1f);
    let a = alpha * alpha * (mf * snt - s1f * st) / det;
    let b = alpha * (s2f * st - s1f * snt) / det;
    let raw: Vec<T> = counts
        .counts()
        .iter()
        .map(|&n| a * T::from_count(n) + b * alpha)
        .collect();
    if !(a.is_finite() && b.is_finite()) || raw.iter().any(|&v| !(v > T::zero())) {
        return Ok(fallback(counts, alpha));
    }
    let total = raw.iter().fold(T::zero(), |s, &v| s + v);
    Ok(ThetaTilde { values: raw.into_iter().map(|v| v / total).collect(), a, b, fallback: false })
}

fn fallback<T: Scalar>(counts: &CountSeq, alpha: T) -> ThetaTilde<T> {
    let raw: Vec<T> = counts.counts().iter().map(|&n| T::from_count(n) + alpha).collect();
    let total = raw.iter().fold(T::zero(), |s, &v| s + v);
    ThetaTilde { values: raw.into_iter().map(|v| v / total).collect(), a: T::one(), b: T::one(), fallback: true }
}

fn fit_alpha<T: Scalar>(counts: &CountSeq, fixed: f64, config: &TestConfig) -> T {
    match config.alpha_policy {
        AlphaPolicy::Fixed => T::lit(fixed),
        AlphaPolicy::Map => estimate_alpha_map_with::<T>(counts, config.alpha_bounds)
            .map(|e| e.alpha)
            .unwrap_or_else(|_| T::lit(fixed)),
    }
}

/// `2 Σ n_ij ln(θ̃_ij / (θ̃_i θ̃_j))`, clamped at zero. Zero for an empty table.
pub fn bf_chi2_statistic<T: Scalar>(table: &ContingencyTable, config: &TestConfig) -> Result<T, CiError> {
    if table.total() == 0 {
        return Ok(T::zero());
    }
    let rows = CountSeq::new(table.row_sums())?;
    let cols = CountSeq::new(table.col_sums())?;
    let joint = table.flattened();
    let tx = solve_theta_tilde(&rows, fit_alpha::<T>(&rows, config.alpha0, config))?;
    let ty = solve_theta_tilde(&cols, fit_alpha::<T>(&cols, config.alpha0, config))?;
    let txy = solve_theta_tilde(&joint, fit_alpha::<T>(&joint, config.alpha1, config))?;
    let ky = table.ky();
    let mut acc = T::zero();
    for (c, &nij) in table.counts().iter().enumerate() {
        if nij > 0 {
            let (i, j) = (c / ky, c % ky);
            acc += T::from_count(nij) * (txy.values[c].ln() - tx.values[i].ln() - ty.values[j].ln());
        }
    }
    Ok((T::lit(2.0) * acc).max(T::zero()))
}

/// BF-chi2 test: the statistic is referred to chi-squared with
/// `(Kx−1)(Ky−1)` degrees of freedom.
pub fn bf_chi2_test<T: Scalar>(table: &ContingencyTable, config: &TestConfig) -> Result<CiDecision<T>, CiError> {
    let strata = usize::from(table.total() > 0);
    let df = if strata == 0 { 0 } else { table_df(table) };
    let stat = if df == 0 { T::zero() } else { bf_chi2_statistic(table, config)? };
    chi2_decision(stat, df, CiMethod::BfChi2, strata, config)
}
