//! G test and Bayes-factor tests.

use crate::citest::{CiDecision, CiError, CiMethod, ContingencyTable, TestConfig};
use crate::numstat::{chi2_sf, ln_gamma, ln_rising};
use crate::scalar::Scalar;

/// `2 Σ n_ij ln(n_ij N / (n_i n_j))`, clamped at zero.
pub(crate) fn g_statistic<T: Scalar>(table: &ContingencyTable) -> T {
    let n = table.total();
    if n == 0 {
        return T::zero();
    }
    let rows = table.row_sums();
    let cols = table.col_sums();
    let nf = T::from_count(n);
    let mut acc = T::zero();
    for (i, &ni) in rows.iter().enumerate() {
        for (j, &nj) in cols.iter().enumerate() {
            let nij = table.get(i, j);
            if nij > 0 {
                let nij = T::from_count(nij);
                acc += nij * (nij * nf / (T::from_count(ni) * T::from_count(nj))).ln();
            }
        }
    }
    (T::lit(2.0) * acc).max(T::zero())
}

pub(crate) fn table_df(table: &ContingencyTable) -> u64 {
    ((table.kx() - 1) * (table.ky() - 1)) as u64
}

/// Decision for a chi-squared referred statistic summed over `strata`.
pub(crate) fn chi2_decision<T: Scalar>(
    statistic: T,
    df: u64,
    method: CiMethod,
    strata: usize,
    config: &TestConfig,
) -> Result<CiDecision<T>, CiError> {
    if df == 0 {
        return Ok(CiDecision {
            statistic: T::zero(),
            p_value: Some(T::one()),
            df: None,
            independent: true,
            method,
            strata_used: strata,
            degenerate: true,
        });
    }
    let p = chi2_sf(statistic, df)?;
    Ok(CiDecision {
        statistic,
        p_value: Some(p),
        df: Some(df),
        independent: p >= T::lit(config.significance),
        method,
        strata_used: strata,
        degenerate: false,
    })
}

/// Likelihood-ratio (G) test of independence.
pub fn g_test<T: Scalar>(table: &ContingencyTable, config: &TestConfig) -> Result<CiDecision<T>, CiError> {
    let strata = usize::from(table.total() > 0);
    let df = if strata == 0 { 0 } else { table_df(table) };
    chi2_decision(g_statistic(table), df, CiMethod::G, strata, config)
}

/// `ln BF` with symmetric Dirichlet priors: `alpha0` on each margin under
/// independence, `alpha1` on the joint cells under dependence. The
/// multinomial coefficient is common to both hypotheses and cancels.
pub fn ln_bayes_factor<T: Scalar>(table: &ContingencyTable, config: &TestConfig) -> Result<T, CiError> {
    let ax = T::lit(config.alpha0);
    let ay = ax;
    let axy = T::lit(config.alpha1);
    if !(ax > T::zero() && axy > T::zero()) {
        return Err(CiError::Invalid("Dirichlet priors must be positive".into()));
    }
    let kx = T::from_usize(table.kx()).unwrap();
    let ky = T::from_usize(table.ky()).unwrap();
    let k = kx * ky;
    let n = T::from_count(table.total());
    let mut acc = ln_gamma(ax * kx)? - ln_gamma(ax * kx + n)? + ln_gamma(ay * ky)? - ln_gamma(ay * ky + n)?
        - ln_gamma(axy * k)?
        + ln_gamma(axy * k + n)?;
    for ni in table.row_sums() {
        acc += ln_rising(ax, ni)?;
    }
    for nj in table.col_sums() {
        acc += ln_rising(ay, nj)?;
    }
    for &nij in table.counts() {
        acc -= ln_rising(axy, nij)?;
    }
    Ok(acc)
}

/// Bayes factor of independence against dependence.
pub fn bayes_factor<T: Scalar>(table: &ContingencyTable, config: &TestConfig) -> Result<T, CiError> {
    Ok(ln_bayes_factor::<T>(table, config)?.exp())
}

/// Independent iff `BF > η`; a tie counts as dependence. An empty table
/// is flagged degenerate.
pub fn bf_threshold_test<T: Scalar>(table: &ContingencyTable, config: &TestConfig) -> Result<CiDecision<T>, CiError> {
    if !(config.bf_threshold > 0.0) {
        return Err(CiError::Invalid("bf_threshold must be positive".into()));
    }
    let ln_bf = ln_bayes_factor::<T>(table, config)?;
    let strata = usize::from(table.total() > 0);
    Ok(CiDecision {
        statistic: ln_bf.exp(),
        p_value: None,
        df: None,
        independent: ln_bf > T::lit(config.bf_threshold.ln()),
        method: CiMethod::BfThreshold,
        strata_used: strata,
        degenerate: strata == 0,
    })
}
