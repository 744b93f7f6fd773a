use causalci_core::bnmodel::{dag_to_cpdag, forward_sample, DiscreteBayesNet};
use causalci_core::citest::{derive_seed, CiMethod, TestConfig};
use causalci_core::discovery::{learn_cpdag, learn_cpdag_oracle};

use crate::report::{BenchmarkReport, MeanStd};
use crate::shd::shd;
use crate::{invalid, BenchError};

/// PC-stable on fresh forward samples of `net`: SHD against the true CPDAG
/// and CI-test counts, aggregated over `runs` per size and method. Every
/// method sees the same dataset for a given size and run.
pub fn run_discovery_bench(
    net: &DiscreteBayesNet,
    sizes: &[usize],
    runs: usize,
    methods: &[CiMethod],
    config: &TestConfig,
    seed: u64,
) -> Result<BenchmarkReport, BenchError> {
    if runs == 0 {
        return invalid("runs must be at least 1");
    }
    if sizes.is_empty() || sizes.contains(&0) || methods.is_empty() {
        return invalid("sizes and methods must be non-empty and sizes positive");
    }
    config.validate()?;
    let truth = dag_to_cpdag(net.dag());
    let mut shds = vec![vec![MeanStd::new(); methods.len()]; sizes.len()];
    let mut tests = vec![vec![MeanStd::new(); methods.len()]; sizes.len()];
    for (si, &n) in sizes.iter().enumerate() {
        for run in 0..runs {
            let needs_data = methods.iter().any(|&m| m != CiMethod::DsepOracle);
            let data = needs_data.then(|| forward_sample(net, n, derive_seed(seed, &[n as u64, run as u64])));
            for (mi, &m) in methods.iter().enumerate() {
                let (g, stats) = match (&data, m) {
                    (_, CiMethod::DsepOracle) => learn_cpdag_oracle(net.dag(), config)?,
                    (Some(d), _) => learn_cpdag(d, m, config)?,
                    (None, _) => unreachable!("data drawn for every data method"),
                };
                shds[si][mi].push(shd(&g, &truth)? as f64);
                tests[si][mi].push(stats.ci_test_count as f64);
                log::debug!("{} n={n} run={run} {m}: {} tests", net.name(), stats.ci_test_count);
            }
        }
    }
    let mut report = BenchmarkReport::new("discovery", seed);
    for (si, &n) in sizes.iter().enumerate() {
        for (mi, &m) in methods.iter().enumerate() {
            report.push(n, m.as_str(), "shd", &shds[si][mi], Some(tests[si][mi].mean()));
        }
    }
    Ok(report)
}
