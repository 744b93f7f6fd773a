//! PC-stable structure learning on top of a pluggable independence test.

mod orient;
mod skeleton;

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::bnmodel::{d_separated, Cpdag, Dag, Dataset, Pdag};
use crate::citest::{CiDecision, CiError, CiMethod, CiTest, DataCiTest, TestConfig};

pub use orient::{apply_meek_rules, orient_v_structures};
pub use skeleton::learn_skeleton;

/// Conditioning set that separated each removed pair.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SepsetMap {
    map: BTreeMap<(usize, usize), Vec<usize>>,
}

impl SepsetMap {
    fn key(a: usize, b: usize) -> (usize, usize) {
        (a.min(b), a.max(b))
    }

    pub fn insert(&mut self, a: usize, b: usize, set: Vec<usize>) {
        self.map.insert(Self::key(a, b), set);
    }

    pub fn get(&self, a: usize, b: usize) -> Option<&[usize]> {
        self.map.get(&Self::key(a, b)).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<usize>)> {
        self.map.iter()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiscoveryStats {
    pub ci_test_count: u64,
    /// Number of tests per conditioning-set size.
    pub tests_by_order: BTreeMap<usize, u64>,
    /// Unordered pairs whose v-structure orientations disagreed.
    pub orientation_conflicts: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl DiscoveryStats {
    pub(crate) fn record(&mut self, order: usize) {
        self.ci_test_count += 1;
        *self.tests_by_order.entry(order).or_insert(0) += 1;
    }
}

/// Independence decided by d-separation in a known DAG.
#[derive(Debug, Clone)]
pub struct DsepOracle<'a> {
    pub dag: &'a Dag,
}

impl CiTest for DsepOracle<'_> {
    fn n_vars(&self) -> usize {
        self.dag.n()
    }

    fn test(&self, x: usize, y: usize, z: &[usize]) -> Result<CiDecision, CiError> {
        let sep = d_separated(self.dag, x, y, z).map_err(|e| CiError::Invalid(e.to_string()))?;
        Ok(CiDecision {
            statistic: if sep { 0.0 } else { 1.0 },
            p_value: None,
            df: None,
            independent: sep,
            method: CiMethod::DsepOracle,
            strata_used: 1,
            degenerate: false,
        })
    }
}

/// Skeleton, v-structures, then Meek closure.
pub fn learn_cpdag_with<T: CiTest + ?Sized>(test: &T, config: &TestConfig) -> Result<(Cpdag, DiscoveryStats), CiError> {
    let start = std::time::Instant::now();
    let (skeleton, sepsets, mut stats) = learn_skeleton(test, config)?;
    let (pdag, conflicts) = orient_v_structures(&skeleton, &sepsets);
    let cpdag = apply_meek_rules(&pdag);
    stats.orientation_conflicts = conflicts;
    stats.elapsed = start.elapsed();
    Ok((cpdag, stats))
}

/// Learns a CPDAG from data with one of the data-driven tests.
pub fn learn_cpdag(data: &Dataset, method: CiMethod, config: &TestConfig) -> Result<(Cpdag, DiscoveryStats), CiError> {
    config.validate()?;
    if data.n_vars() < 2 {
        return Err(CiError::Invalid("structure learning needs at least two variables".into()));
    }
    let test = DataCiTest::new(data, method, *config);
    learn_cpdag_with(&test, config)
}

/// Learns the CPDAG that PC-stable recovers with a perfect oracle for `dag`.
pub fn learn_cpdag_oracle(dag: &Dag, config: &TestConfig) -> Result<(Cpdag, DiscoveryStats), CiError> {
    learn_cpdag_with(&DsepOracle { dag }, config)
}

/// Edge list with names: `A -> B` for directed and `A -- B` for undirected
/// edges, directed edges first, each group in index order.
pub fn edge_list(g: &Pdag, names: &[String]) -> String {
    let mut out = String::new();
    for (a, b) in g.directed_edges() {
        out.push_str(&format!("{} -> {}\n", names[a], names[b]));
    }
    for (a, b) in g.undirected_edges() {
        out.push_str(&format!("{} -- {}\n", names[a], names[b]));
    }
    out
}
