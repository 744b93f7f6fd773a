//! Conditional tests by stratifying on the conditioning set.

use std::sync::{Arc, OnceLock};

use crate::bnmodel::Dataset;
use crate::citest::stat::{chi2_decision, g_statistic, ln_bayes_factor};
use crate::citest::{
    bf_chi2_statistic, mi_eb_with, mi_mle, CiDecision, CiError, CiMethod, ContingencyTable, MiThreshold, TestConfig,
    ThresholdCache,
};

/// Non-empty `x × y` tables, one per observed configuration of `z`,
/// ordered by the configuration's mixed-radix index.
#[derive(Debug, Clone, PartialEq)]
pub struct Strata {
    pub kx: usize,
    pub ky: usize,
    pub tables: Vec<ContingencyTable>,
}

impl Strata {
    pub fn total(&self) -> u64 {
        self.tables.iter().map(ContingencyTable::total).sum()
    }
}

/// Cross-tabulates `x` against `y` within each configuration of `z`.
pub fn stratify(data: &Dataset, x: usize, y: usize, z: &[usize]) -> Result<Strata, CiError> {
    let (kx, ky) = (data.cardinality(x), data.cardinality(y));
    let cells = kx * ky;
    let mut configs: usize = 1;
    for &v in z {
        configs = configs
            .checked_mul(data.cardinality(v))
            .ok_or_else(|| CiError::Invalid("conditioning set too large".into()))?;
    }
    let rows = data.n_rows();
    let (cx, cy) = (data.column(x), data.column(y));
    let zcols: Vec<&[u16]> = z.iter().map(|&v| data.column(v)).collect();
    let zcards: Vec<usize> = z.iter().map(|&v| data.cardinality(v)).collect();
    let key = |r: usize| {
        let mut k = 0usize;
        for (col, &card) in zcols.iter().zip(&zcards) {
            k = k * card + col[r] as usize;
        }
        k
    };

    let mut tables = Vec::new();
    let dense_limit = (8 * rows).max(4096);
    if configs.saturating_mul(cells) <= dense_limit {
        let mut counts = vec![0u64; configs * cells];
        for r in 0..rows {
            counts[key(r) * cells + cx[r] as usize * ky + cy[r] as usize] += 1;
        }
        for chunk in counts.chunks(cells) {
            if chunk.iter().any(|&c| c > 0) {
                tables.push(ContingencyTable::from_counts(kx, ky, chunk.to_vec())?);
            }
        }
    } else {
        let mut codes: Vec<(usize, usize)> = (0..rows)
            .map(|r| (key(r), cx[r] as usize * ky + cy[r] as usize))
            .collect();
        codes.sort_unstable();
        let mut i = 0;
        while i < codes.len() {
            let k = codes[i].0;
            let mut t = vec![0u64; cells];
            while i < codes.len() && codes[i].0 == k {
                t[codes[i].1] += 1;
                i += 1;
            }
            tables.push(ContingencyTable::from_counts(kx, ky, t)?);
        }
    }
    Ok(Strata { kx, ky, tables })
}

/// Process-wide threshold memo. Thresholds depend only on their key, so
/// sharing it never changes a decision.
pub fn global_cache() -> Arc<ThresholdCache> {
    static CACHE: OnceLock<Arc<ThresholdCache>> = OnceLock::new();
    CACHE.get_or_init(|| Arc::new(ThresholdCache::new())).clone()
}

/// Tests `x ⟂ y | z` on `data`. Calibrated MI thresholds are memoized in a
/// process-wide cache.
pub fn conditional_test(
    data: &Dataset,
    x: usize,
    y: usize,
    z: &[usize],
    method: CiMethod,
    config: &TestConfig,
) -> Result<CiDecision, CiError> {
    conditional_test_with(data, x, y, z, method, config, &global_cache())
}

/// [`conditional_test`] with a caller-owned threshold cache.
///
/// Chi-squared referred statistics and their degrees of freedom are summed
/// over non-empty strata. MI methods average per-stratum MI weighted by
/// stratum size and compare it with the same weighting of per-stratum
/// thresholds, each calibrated at that stratum's size. The Bayes factor is the product of per-stratum factors.
pub fn conditional_test_with(
    data: &Dataset,
    x: usize,
    y: usize,
    z: &[usize],
    method: CiMethod,
    config: &TestConfig,
    cache: &ThresholdCache,
) -> Result<CiDecision, CiError> {
    let nv = data.n_vars();
    if x >= nv || y >= nv || z.iter().any(|&v| v >= nv) {
        return Err(CiError::Invalid("variable index out of range".into()));
    }
    if x == y || z.contains(&x) || z.contains(&y) {
        return Err(CiError::Invalid("x, y and z must be disjoint".into()));
    }
    if z.len() > config.max_cond_set {
        return Err(CiError::Invalid(format!("{} conditioning variables exceed the limit {}", z.len(), config.max_cond_set)));
    }
    if method == CiMethod::DsepOracle {
        return Err(CiError::Invalid("the d-separation oracle needs a DAG, not data".into()));
    }
    let strata = stratify(data, x, y, z)?;
    decide_strata(&strata, method, config, cache)
}

pub(crate) fn decide_strata(
    strata: &Strata,
    method: CiMethod,
    config: &TestConfig,
    cache: &ThresholdCache,
) -> Result<CiDecision, CiError> {
    let used = strata.tables.len();
    let no_info = |statistic: f64, p: Option<f64>| CiDecision {
        statistic,
        p_value: p,
        df: None,
        independent: true,
        method,
        strata_used: used,
        degenerate: true,
    };
    if used == 0 {
        return Ok(no_info(0.0, method.has_p_value().then_some(1.0)));
    }
    let df_one = ((strata.kx - 1) * (strata.ky - 1)) as u64;
    match method {
        CiMethod::G | CiMethod::BfChi2 => {
            let mut stat = 0.0;
            for t in &strata.tables {
                stat += if method == CiMethod::G {
                    g_statistic::<f64>(t)
                } else if df_one == 0 {
                    0.0
                } else {
                    bf_chi2_statistic::<f64>(t, config)?
                };
            }
            chi2_decision(stat, df_one * used as u64, method, used, config)
        }
        CiMethod::BfThreshold => {
            let mut ln_bf = 0.0;
            for t in &strata.tables {
                ln_bf += ln_bayes_factor::<f64>(t, config)?;
            }
            Ok(CiDecision {
                statistic: ln_bf.exp(),
                p_value: None,
                df: None,
                independent: ln_bf > config.bf_threshold.ln(),
                method,
                strata_used: used,
                degenerate: false,
            })
        }
        CiMethod::DsepOracle => Err(CiError::Invalid("the d-separation oracle needs a DAG, not data".into())),
        CiMethod::MiMle | CiMethod::MiEb => {
            if df_one == 0 {
                return Ok(no_info(0.0, None));
            }
            let total = strata.total() as f64;
            let (mut weighted, mut weighted_threshold) = (0.0, 0.0);
            for t in &strata.tables {
                let n = t.total() as f64;
                let mi = if method == CiMethod::MiMle {
                    mi_mle::<f64>(t)?
                } else {
                    mi_eb_with::<f64>(t, None, config.alpha_bounds)?.value
                };
                weighted += n * mi;
                weighted_threshold += n * match config.mi_threshold {
                    MiThreshold::Fixed(v) => v,
                    MiThreshold::Calibrated { trials, seed } => {
                        cache.threshold(strata.kx, strata.ky, n, config.significance, trials, seed)?
                    }
                };
            }
            let value = weighted / total;
            let threshold = weighted_threshold / total;
            Ok(CiDecision {
                statistic: value,
                p_value: None,
                df: None,
                independent: value < threshold,
                method,
                strata_used: used,
                degenerate: false,
            })
        }
    }
}

/// Contract between structure learners and an independence oracle.
pub trait CiTest: Sync {
    fn n_vars(&self) -> usize;

    /// Decides `x ⟂ y | z`.
    fn test(&self, x: usize, y: usize, z: &[usize]) -> Result<CiDecision, CiError>;

    /// `false` for variables that carry no information (a single state);
    /// learners isolate them without testing.
    fn is_informative(&self, _v: usize) -> bool {
        true
    }
}

/// Data-backed test with a fixed method and configuration.
#[derive(Debug, Clone)]
pub struct DataCiTest<'a> {
    pub data: &'a Dataset,
    pub method: CiMethod,
    pub config: TestConfig,
    pub cache: Arc<ThresholdCache>,
}

impl<'a> DataCiTest<'a> {
    /// Uses the process-wide threshold cache.
    pub fn new(data: &'a Dataset, method: CiMethod, config: TestConfig) -> Self {
        DataCiTest { data, method, config, cache: global_cache() }
    }

    pub fn with_cache(mut self, cache: Arc<ThresholdCache>) -> Self {
        self.cache = cache;
        self
    }
}

impl CiTest for DataCiTest<'_> {
    fn n_vars(&self) -> usize {
        self.data.n_vars()
    }

    fn test(&self, x: usize, y: usize, z: &[usize]) -> Result<CiDecision, CiError> {
        conditional_test_with(self.data, x, y, z, self.method, &self.config, &self.cache)
    }

    fn is_informative(&self, v: usize) -> bool {
        let col = self.data.column(v);
        self.data.cardinality(v) > 1 && col.iter().any(|&s| s != col[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::citest::{bf_chi2_test, bf_threshold_test, g_test};

    fn data(cols: Vec<Vec<u16>>, cards: Vec<usize>) -> Dataset {
        let names = (0..cols.len()).map(|i| format!("v{i}")).collect();
        Dataset::new(names, cards, cols).unwrap()
    }

    #[test]
    fn empty_conditioning_matches_marginal() {
        let x = vec![0, 1, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1];
        let y = vec![0, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0, 1];
        let d = data(vec![x.clone(), y.clone()], vec![2, 2]);
        let table = ContingencyTable::from_pairs(&x, &y, 2, 2).unwrap();
        let cfg = TestConfig::default();
        let g = conditional_test(&d, 0, 1, &[], CiMethod::G, &cfg).unwrap();
        assert_eq!(g, g_test(&table, &cfg).unwrap());
        let b = conditional_test(&d, 0, 1, &[], CiMethod::BfChi2, &cfg).unwrap();
        assert_eq!(b, bf_chi2_test(&table, &cfg).unwrap());
        let bf = conditional_test(&d, 0, 1, &[], CiMethod::BfThreshold, &cfg).unwrap();
        let direct: CiDecision = bf_threshold_test(&table, &cfg).unwrap();
        assert!((bf.statistic - direct.statistic).abs() < 1e-12);
        assert_eq!(bf.independent, direct.independent);
    }

    #[test]
    fn df_counts_populated_strata() {
        let d = data(
            vec![vec![0, 1, 0, 1, 0, 1], vec![1, 0, 0, 1, 1, 0], vec![0, 0, 0, 1, 1, 1]],
            vec![2, 2, 3],
        );
        let dec = conditional_test(&d, 0, 1, &[2], CiMethod::G, &TestConfig::default()).unwrap();
        assert_eq!(dec.df, Some(2));
        assert_eq!(dec.strata_used, 2);
    }

    #[test]
    fn sparse_path_matches_dense() {
        let n = 40;
        let cols: Vec<Vec<u16>> = (0..6)
            .map(|v| (0..n).map(|r| ((r * (v + 3) + v * v) % 7) as u16).collect())
            .collect();
        let d = data(cols, vec![7; 6]);
        let s = stratify(&d, 0, 1, &[2, 3, 4, 5]).unwrap();
        // 7^4 · 49 cells forces the sorted path; compare with a direct tally.
        let mut direct = std::collections::BTreeMap::new();
        for r in 0..n {
            let key: Vec<u16> = (2..6).map(|v| d.column(v)[r]).collect();
            direct
                .entry(key)
                .or_insert_with(|| ContingencyTable::zeros(7, 7).unwrap())
                .add(d.column(0)[r] as usize, d.column(1)[r] as usize, 1);
        }
        assert_eq!(s.tables, direct.into_values().collect::<Vec<_>>());
    }

    #[test]
    fn argument_checks() {
        let d = data(vec![vec![0, 1], vec![1, 0], vec![0, 0]], vec![2, 2, 2]);
        let cfg = TestConfig::default();
        assert!(conditional_test(&d, 0, 0, &[], CiMethod::G, &cfg).is_err());
        assert!(conditional_test(&d, 0, 1, &[1], CiMethod::G, &cfg).is_err());
        assert!(conditional_test(&d, 0, 5, &[], CiMethod::G, &cfg).is_err());
        let tight = TestConfig { max_cond_set: 0, ..cfg };
        assert!(conditional_test(&d, 0, 1, &[2], CiMethod::G, &tight).is_err());
    }

    #[test]
    fn no_rows_is_flagged() {
        let d = data(vec![vec![], vec![]], vec![2, 2]);
        for m in CiMethod::ALL {
            let dec = conditional_test(&d, 0, 1, &[], m, &TestConfig::default()).unwrap();
            assert!(dec.independent && dec.degenerate);
        }
    }

    #[test]
    fn constant_column_not_informative() {
        let d = data(vec![vec![1, 1, 1], vec![0, 1, 0]], vec![2, 2]);
        let t = DataCiTest::new(&d, CiMethod::G, TestConfig::default());
        assert!(!t.is_informative(0));
        assert!(t.is_informative(1));
    }
}
