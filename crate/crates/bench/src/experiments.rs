//! Synthetic-data experiments on single contingency tables.

use std::fmt;
use std::str::FromStr;

use causalci_core::citest::{
    bf_chi2_test, derive_seed, g_test, ln_bayes_factor, mi_eb, mi_mle, AlphaPolicy, CiMethod, ContingencyTable,
    TestConfig,
};
use causalci_core::numstat::{chi2_cdf, ln_gamma, log_polya, multinomial_sample_with, CountSeq};
use causalci_core::citest::solve_theta_tilde;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::report::{BenchmarkReport, MeanStd};
use crate::synth::PairDesign;
use crate::{invalid, BenchError};

fn trial_rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, parts))
}

fn check_sizes(sizes: &[usize], trials: usize) -> Result<(), BenchError> {
    if sizes.is_empty() || sizes.contains(&0) {
        return invalid("sizes must be non-empty and positive");
    }
    if trials == 0 {
        return invalid("trials must be positive");
    }
    Ok(())
}

/// MI estimators compared by the MI-error experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MiEstimator {
    Mle,
    /// Empirical Bayes with the MAP concentration.
    EbMap,
    /// Empirical Bayes with a fixed concentration.
    EbFixed(f64),
}

impl MiEstimator {
    pub fn estimate(self, table: &ContingencyTable) -> Result<f64, BenchError> {
        Ok(match self {
            MiEstimator::Mle => mi_mle(table)?,
            MiEstimator::EbMap => mi_eb(table, None)?.value,
            MiEstimator::EbFixed(a) => mi_eb(table, Some(a))?.value,
        })
    }
}

impl fmt::Display for MiEstimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MiEstimator::Mle => f.write_str("mi_mle"),
            MiEstimator::EbMap => f.write_str("mi_eb_map"),
            MiEstimator::EbFixed(a) => write!(f, "mi_eb_fixed({a})"),
        }
    }
}

impl FromStr for MiEstimator {
    type Err = BenchError;

    /// Accepts `mi_mle`, `mi_eb_map` (or `mi_eb`) and `mi_eb_fixed(α)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase().replace('-', "_");
        match t.as_str() {
            "mi_mle" => return Ok(MiEstimator::Mle),
            "mi_eb_map" | "mi_eb" => return Ok(MiEstimator::EbMap),
            _ => {}
        }
        if let Some(arg) = t.strip_prefix("mi_eb_fixed(").and_then(|r| r.strip_suffix(')')) {
            if let Ok(a) = arg.parse::<f64>() {
                if a > 0.0 && a.is_finite() {
                    return Ok(MiEstimator::EbFixed(a));
                }
            }
        }
        invalid(format!("unknown MI estimator '{s}'"))
    }
}

/// Mean absolute error `|MI_hat − MI_true|` per size and estimator. All
/// estimators see the same tables.
pub fn run_mi_error_bench(
    sizes: &[usize],
    trials: usize,
    methods: &[MiEstimator],
    design: &PairDesign,
    seed: u64,
) -> Result<BenchmarkReport, BenchError> {
    check_sizes(sizes, trials)?;
    design.validate()?;
    let mut report = BenchmarkReport::new("mi_error", seed);
    for &n in sizes {
        let mut acc = vec![MeanStd::new(); methods.len()];
        for t in 0..trials {
            let mut rng = trial_rng(seed, &[n as u64, t as u64]);
            let (table, mi) = design.draw_table(n as u64, &mut rng);
            for (m, a) in methods.iter().zip(acc.iter_mut()) {
                a.push((m.estimate(&table)? - mi).abs());
            }
        }
        for (m, a) in methods.iter().zip(&acc) {
            report.push(n, &m.to_string(), "abs_error", a, None);
        }
    }
    Ok(report)
}

/// Generator and Type-1 handling for [`run_type1_power_bench`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Type1Design {
    pub kx: usize,
    pub ky: usize,
    pub gen_alpha: f64,
    /// Replace each method's nominal rule by an empirical critical value:
    /// the `(1 − significance)` quantile of its statistic over a separate
    /// set of null tables. Type-1 rates then match across methods and
    /// power compares like with like.
    pub matched: bool,
}

impl Default for Type1Design {
    fn default() -> Self {
        Type1Design { kx: 3, ky: 3, gen_alpha: 1.0, matched: false }
    }
}

/// Larger means stronger evidence of dependence.
fn dependence_score(method: CiMethod, table: &ContingencyTable, config: &TestConfig) -> Result<f64, BenchError> {
    Ok(match method {
        CiMethod::G => g_test::<f64>(table, config)?.statistic,
        CiMethod::BfChi2 => bf_chi2_test::<f64>(table, config)?.statistic,
        CiMethod::BfThreshold => -ln_bayes_factor::<f64>(table, config)?,
        _ => unreachable!("checked by caller"),
    })
}

fn rejects(method: CiMethod, table: &ContingencyTable, config: &TestConfig) -> Result<bool, BenchError> {
    Ok(!match method {
        CiMethod::G => g_test::<f64>(table, config)?.independent,
        CiMethod::BfChi2 => bf_chi2_test::<f64>(table, config)?.independent,
        CiMethod::BfThreshold => causalci_core::citest::bf_threshold_test::<f64>(table, config)?.independent,
        _ => unreachable!("checked by caller"),
    })
}

/// Type-1 error on independent pairs and power on dependent pairs, per
/// size and method. Records metrics `type1` and `power`, and
/// `critical_value` when `design.matched`.
pub fn run_type1_power_bench(
    sizes: &[usize],
    trials: usize,
    methods: &[CiMethod],
    design: &Type1Design,
    config: &TestConfig,
    seed: u64,
) -> Result<BenchmarkReport, BenchError> {
    check_sizes(sizes, trials)?;
    config.validate()?;
    if let Some(m) = methods.iter().find(|m| !matches!(m, CiMethod::G | CiMethod::BfThreshold | CiMethod::BfChi2)) {
        return invalid(format!("{m} is not a hypothesis test"));
    }
    let null = PairDesign::new(design.kx, design.ky, design.gen_alpha, false);
    null.validate()?;
    let alt = null.with_dependent(true);
    let mut report = BenchmarkReport::new("type1_power", seed);
    for &n in sizes {
        let draw = |d: &PairDesign, t: usize, tag: u64| d.draw_table(n as u64, &mut trial_rng(seed, &[n as u64, t as u64, tag])).0;
        let nulls: Vec<_> = (0..trials).map(|t| draw(&null, t, 0)).collect();
        let alts: Vec<_> = (0..trials).map(|t| draw(&alt, t, 1)).collect();
        let calib: Vec<_> = if design.matched { (0..trials).map(|t| draw(&null, t, 2)).collect() } else { Vec::new() };
        for &m in methods {
            let (mut type1, mut power) = (MeanStd::new(), MeanStd::new());
            if design.matched {
                let mut scores = calib.iter().map(|t| dependence_score(m, t, config)).collect::<Result<Vec<_>, _>>()?;
                scores.sort_by(f64::total_cmp);
                let k = ((1.0 - config.significance) * trials as f64).ceil() as usize;
                let critical = scores[k.min(trials - 1)];
                for t in &nulls {
                    type1.push(f64::from(u8::from(dependence_score(m, t, config)? > critical)));
                }
                for t in &alts {
                    power.push(f64::from(u8::from(dependence_score(m, t, config)? > critical)));
                }
                let mut c = MeanStd::new();
                c.push(critical);
                report.push(n, m.as_str(), "critical_value", &c, None);
            } else {
                for t in &nulls {
                    type1.push(f64::from(u8::from(rejects(m, t, config)?)));
                }
                for t in &alts {
                    power.push(f64::from(u8::from(rejects(m, t, config)?)));
                }
            }
            report.push(n, m.as_str(), "type1", &type1, None);
            report.push(n, m.as_str(), "power", &power, None);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceRow {
    pub state: usize,
    pub theta: f64,
    pub mle_var: f64,
    pub bayes_var: f64,
    pub mle_var_analytic: f64,
    pub bayes_var_analytic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub experiment: String,
    pub seed: u64,
    pub n: usize,
    pub alpha: f64,
    pub trials: usize,
    pub states: Vec<VarianceRow>,
}

/// Empirical per-state variance of `n_i/N` and `(n_i+α)/(N+Kα)` over
/// `trials` multinomial samples from `theta`, next to the closed forms
/// `Nθ(1−θ)/N²` and `Nθ(1−θ)/(N+Kα)²`.
pub fn run_variance_bench(
    theta: &[f64],
    n: usize,
    trials: usize,
    alpha: f64,
    seed: u64,
) -> Result<VarianceReport, BenchError> {
    if theta.len() < 2 || theta.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return invalid("theta must have at least two entries in [0, 1]");
    }
    if (theta.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return invalid("theta must sum to one");
    }
    if n == 0 || trials < 2 {
        return invalid("need N ≥ 1 and at least two trials");
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return invalid(format!("alpha = {alpha}"));
    }
    let k = theta.len();
    let (nf, kf) = (n as f64, k as f64);
    let draws: Vec<Vec<u64>> = (0..trials)
        .map(|t| multinomial_sample_with(n as u64, theta, &mut trial_rng(seed, &[t as u64])))
        .collect();
    // Both estimators are affine in the count, so their variances are the
    // count variance scaled; working on integers keeps a constant count at
    // exactly zero variance.
    let count_var = |state: usize| {
        let mean = draws.iter().map(|d| d[state] as f64).sum::<f64>() / trials as f64;
        draws.iter().map(|d| (d[state] as f64 - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0)
    };
    let bayes_den = nf + kf * alpha;
    let states = (0..k)
        .map(|i| {
            let spread = nf * theta[i] * (1.0 - theta[i]);
            let v = count_var(i);
            VarianceRow {
                state: i,
                theta: theta[i],
                mle_var: v / (nf * nf),
                bayes_var: v / (bayes_den * bayes_den),
                mle_var_analytic: spread / (nf * nf),
                bayes_var_analytic: spread / (bayes_den * bayes_den),
            }
        })
        .collect();
    Ok(VarianceReport { experiment: "variance".into(), seed, n, alpha, trials, states })
}

/// Count-sequence shape for the Polya approximation experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyaSpec {
    pub k: usize,
    pub n: usize,
}

/// Relative error `|p − p̃| / p` of the θ̃ multinomial likelihood against
/// the exact Polya likelihood of `counts`.
pub fn polya_approx_error(counts: &CountSeq, alpha: f64) -> Result<f64, BenchError> {
    let exact: f64 = log_polya(counts, alpha)?;
    let theta = solve_theta_tilde::<f64>(counts, alpha)?;
    let mut approx = ln_gamma(counts.total() as f64 + 1.0)?;
    for (&c, &p) in counts.counts().iter().zip(&theta.values) {
        approx -= ln_gamma(c as f64 + 1.0)?;
        if c > 0 {
            approx += c as f64 * p.ln();
        }
    }
    Ok((1.0 - (approx - exact).exp()).abs())
}

/// Mean relative error of the θ̃ approximation per spec and `α`. Counts
/// come from a multinomial whose parameters are drawn from a uniform
/// Dirichlet. Records use `size = n`, `method = alpha=<α>` and
/// `metric = rel_error_k<k>`.
pub fn run_polya_approx_bench(
    specs: &[PolyaSpec],
    alphas: &[f64],
    trials: usize,
    seed: u64,
) -> Result<BenchmarkReport, BenchError> {
    if trials == 0 || specs.is_empty() || alphas.is_empty() {
        return invalid("specs, alphas and trials must be non-empty");
    }
    if let Some(s) = specs.iter().find(|s| s.k < 2 || s.n == 0) {
        return invalid(format!("bad count spec k={} n={}", s.k, s.n));
    }
    if alphas.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
        return invalid("alphas must be positive");
    }
    let mut report = BenchmarkReport::new("polya_approx", seed);
    for s in specs {
        let counts: Vec<CountSeq> = (0..trials)
            .map(|t| {
                let mut rng = trial_rng(seed, &[s.k as u64, s.n as u64, t as u64]);
                let theta: Vec<f64> =
                    causalci_core::numstat::dirichlet_sample_with(&vec![1.0; s.k], &mut rng).expect("valid alpha");
                CountSeq::new(multinomial_sample_with(s.n as u64, &theta, &mut rng)).expect("k ≥ 2")
            })
            .collect();
        for &a in alphas {
            let mut acc = MeanStd::new();
            for c in &counts {
                acc.push(polya_approx_error(c, a)?);
            }
            report.push(s.n, &format!("alpha={a}"), &format!("rel_error_k{}", s.k), &acc, None);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatDistRow {
    pub method: CiMethod,
    /// Kolmogorov distance between the empirical CDF and chi-squared.
    pub sup_distance: f64,
    pub mean_statistic: f64,
    /// Fraction of trials rejected at the configured significance.
    pub rejection_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatDistReport {
    pub experiment: String,
    pub seed: u64,
    pub k: usize,
    pub n: usize,
    pub df: u64,
    pub trials: usize,
    pub alpha_policy: AlphaPolicy,
    pub rows: Vec<StatDistRow>,
}

impl StatDistReport {
    pub fn row(&self, method: CiMethod) -> Option<&StatDistRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

/// Null distributions of the G and BF-chi2 statistics on `k × k` tables of
/// `n` observations, compared with chi-squared on `(k−1)²` degrees of
/// freedom. Margins are drawn from a uniform Dirichlet.
pub fn run_statistic_distribution_bench(
    k: usize,
    n: usize,
    trials: usize,
    alpha_policy: AlphaPolicy,
    seed: u64,
) -> Result<StatDistReport, BenchError> {
    if trials < 2000 {
        return invalid(format!("trials = {trials}, need at least 2000"));
    }
    if n == 0 {
        return invalid("N must be positive");
    }
    let design = PairDesign::new(k, k, 1.0, false);
    design.validate()?;
    let config = TestConfig { alpha_policy, ..TestConfig::default() };
    let df = ((k - 1) * (k - 1)) as u64;
    let tables: Vec<_> =
        (0..trials).map(|t| design.draw_table(n as u64, &mut trial_rng(seed, &[n as u64, t as u64])).0).collect();
    let mut rows = Vec::new();
    for method in [CiMethod::G, CiMethod::BfChi2] {
        let mut stats = Vec::with_capacity(trials);
        let mut rejected = 0usize;
        for t in &tables {
            let d = if method == CiMethod::G { g_test::<f64>(t, &config)? } else { bf_chi2_test::<f64>(t, &config)? };
            stats.push(d.statistic);
            rejected += usize::from(!d.independent);
        }
        let mean_statistic = stats.iter().sum::<f64>() / trials as f64;
        stats.sort_by(f64::total_cmp);
        let m = trials as f64;
        let mut sup: f64 = 0.0;
        for (i, &x) in stats.iter().enumerate() {
            let f = chi2_cdf(x, df)?;
            sup = sup.max((i + 1) as f64 / m - f).max(f - i as f64 / m);
        }
        rows.push(StatDistRow { method, sup_distance: sup, mean_statistic, rejection_rate: rejected as f64 / m });
    }
    Ok(StatDistReport { experiment: "stat_dist".into(), seed, k, n, df, trials, alpha_policy, rows })
}
