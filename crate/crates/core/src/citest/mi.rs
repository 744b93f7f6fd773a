//! Plug-in and empirical-Bayes mutual information (nats).

use serde::{Deserialize, Serialize};

use crate::citest::{CiError, ContingencyTable};
use crate::numstat::{digamma, estimate_alpha_map_with, AlphaBounds};
use crate::scalar::Scalar;

/// Plug-in MI with `θ̂_ij = n_ij / N`; empty cells contribute nothing.
///
/// Returns `Degenerate` when a variable has a single state (MI is 0 by
/// definition) or the table is empty.
pub fn mi_mle<T: Scalar>(table: &ContingencyTable) -> Result<T, CiError> {
    if table.kx() < 2 || table.ky() < 2 {
        return Err(CiError::Degenerate("single-state variable"));
    }
    let n = table.total();
    if n == 0 {
        return Err(CiError::Degenerate("empty table"));
    }
    let rows = table.row_sums();
    let cols = table.col_sums();
    let nf = T::from_count(n);
    let mut acc = T::zero();
    for (i, &ni) in rows.iter().enumerate() {
        for (j, &nj) in cols.iter().enumerate() {
            let nij = table.get(i, j);
            if nij == 0 {
                continue;
            }
            let nij = T::from_count(nij);
            acc += nij * (nij * nf / (T::from_count(ni) * T::from_count(nj))).ln();
        }
    }
    Ok((acc / nf).max(T::zero()))
}

/// Empirical-Bayes MI and the concentration it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiEbEstimate<T = f64> {
    pub value: T,
    pub alpha: T,
    /// The MAP fit was degenerate and `α = 1` was used.
    pub alpha_fallback: bool,
}

/// Posterior-expected MI under a symmetric Dirichlet(α) prior on the joint
/// cells, in closed form. With `alpha = None` the concentration is the MAP
/// estimate from the flattened joint counts over the default bounds.
pub fn mi_eb<T: Scalar>(table: &ContingencyTable, alpha: Option<T>) -> Result<MiEbEstimate<T>, CiError> {
    mi_eb_with(table, alpha, AlphaBounds::default())
}

/// [`mi_eb`] with explicit bounds for the MAP search.
pub fn mi_eb_with<T: Scalar>(
    table: &ContingencyTable,
    alpha: Option<T>,
    bounds: AlphaBounds,
) -> Result<MiEbEstimate<T>, CiError> {
    let (alpha, alpha_fallback) = match alpha {
        Some(a) if a > T::zero() && a.is_finite() => (a, false),
        Some(a) => {
            return Err(CiError::Invalid(format!("alpha = {a}")));
        }
        None => match estimate_alpha_map_with::<T>(&table.flattened(), bounds) {
            Ok(est) => (est.alpha, false),
            Err(crate::numstat::NumError::Degenerate(_)) => (T::one(), true),
            Err(e) => return Err(e.into()),
        },
    };
    let value = mi_eb_closed_form(table, alpha)?;
    Ok(MiEbEstimate { value, alpha, alpha_fallback })
}

fn mi_eb_closed_form<T: Scalar>(table: &ContingencyTable, a: T) -> Result<T, CiError> {
    let (kx, ky) = (table.kx(), table.ky());
    let kxf = T::from_usize(kx).unwrap();
    let kyf = T::from_usize(ky).unwrap();
    let n = T::from_count(table.total());
    let ak = a * kxf * kyf;
    let one = T::one();
    let psi_rows = table
        .row_sums()
        .into_iter()
        .map(|ni| digamma(T::from_count(ni) + a * kyf + one))
        .collect::<Result<Vec<_>, _>>()?;
    let psi_cols = table
        .col_sums()
        .into_iter()
        .map(|nj| digamma(T::from_count(nj) + a * kxf + one))
        .collect::<Result<Vec<_>, _>>()?;
    let mut acc = T::zero();
    for i in 0..kx {
        for j in 0..ky {
            let nij = T::from_count(table.get(i, j)) + a;
            acc += nij * (psi_rows[i] + psi_cols[j] - digamma(nij + one)?);
        }
    }
    let mi = digamma(n + ak + one)? - acc / (n + ak);
    Ok(mi.max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[[u64; 2]]) -> ContingencyTable {
        ContingencyTable::from_rows(rows).unwrap()
    }

    #[test]
    fn mle_examples() {
        assert!(mi_mle::<f64>(&t(&[[5, 5], [5, 5]])).unwrap().abs() < 1e-15);
        let v: f64 = mi_mle(&t(&[[10, 0], [0, 10]])).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-14);
        // Direct summation of the definition with θ̂ = counts / 10.
        let p = [[0.4, 0.1], [0.1, 0.4]];
        let oracle: f64 = p.iter().flatten().map(|&q| q * (q / 0.25_f64).ln()).sum();
        let v: f64 = mi_mle(&t(&[[4, 1], [1, 4]])).unwrap();
        assert!((v - oracle).abs() < 1e-14);
    }

    #[test]
    fn mle_degenerate() {
        let one_col = ContingencyTable::from_rows(&[[3u64], [4]]).unwrap();
        assert!(matches!(mi_mle::<f64>(&one_col), Err(CiError::Degenerate(_))));
        assert!(matches!(mi_mle::<f64>(&t(&[[0, 0], [0, 0]])), Err(CiError::Degenerate(_))));
    }

    #[test]
    fn eb_large_independent_table_is_small() {
        let est: MiEbEstimate = mi_eb(&t(&[[250, 250], [250, 250]]), Some(1.0)).unwrap();
        assert!(est.value < 0.01);
    }

    #[test]
    fn eb_map_fallback_on_empty() {
        let est: MiEbEstimate = mi_eb(&t(&[[0, 0], [0, 0]]), None).unwrap();
        assert!(est.alpha_fallback);
        assert_eq!(est.alpha, 1.0);
        assert!(est.value > 0.0);
    }

    #[test]
    fn eb_single_state_is_zero() {
        let one_col = ContingencyTable::from_rows(&[[3u64], [4]]).unwrap();
        let est: MiEbEstimate = mi_eb(&one_col, Some(0.5)).unwrap();
        assert!(est.value.abs() < 1e-12);
    }

    #[test]
    fn eb_rejects_bad_alpha() {
        assert!(mi_eb(&t(&[[1, 2], [3, 4]]), Some(0.0)).is_err());
    }

    #[test]
    fn eb_approaches_mle() {
        let table = t(&[[40_000, 10_000], [10_000, 40_000]]);
        let mle: f64 = mi_mle(&table).unwrap();
        let eb: MiEbEstimate = mi_eb(&table, Some(1.0)).unwrap();
        assert!((eb.value - mle).abs() < 1e-4);
    }

    #[test]
    fn eb_f32() {
        let est: MiEbEstimate<f32> = mi_eb(&t(&[[4, 1], [1, 4]]), Some(1.0f32)).unwrap();
        let est64: MiEbEstimate = mi_eb(&t(&[[4, 1], [1, 4]]), Some(1.0)).unwrap();
        assert!((est.value as f64 - est64.value).abs() < 1e-5);
    }
}
