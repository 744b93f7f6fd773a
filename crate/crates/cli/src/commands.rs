use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use causalci_bench::{
    run_discovery_bench, run_mi_error_bench, run_polya_approx_bench, run_statistic_distribution_bench,
    run_type1_power_bench, run_variance_bench, BenchError, MiEstimator, PairDesign, PolyaSpec, Type1Design,
};
use causalci_core::bnmodel::{forward_sample, parse_bif, BnError, Dataset, DiscreteBayesNet};
use causalci_core::citest::{conditional_test, AlphaPolicy, CiError, CiMethod, MiThreshold, TestConfig};
use causalci_core::discovery::{edge_list, learn_cpdag};
use causalci_core::numstat::NumError;
use serde::Serialize;

use crate::args::{BenchArgs, CitestArgs, Cli, Command, DiscoverArgs, Experiment, PolicyArg, SampleArgs, TestOpts};

/// An error with its process exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    pub fn format(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Failure { code: 3, message: format!("{}: {e}", path.display()) }
    }

    pub fn code(&self) -> u8 {
        self.code
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

impl From<CiError> for Failure {
    fn from(e: CiError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<NumError> for Failure {
    fn from(e: NumError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<BnError> for Failure {
    fn from(e: BnError) -> Self {
        match e {
            BnError::Io(e) => Failure { code: 3, message: e.to_string() },
            other => Failure::format(other.to_string()),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Bn(e) => e.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Sample(a) => sample(a),
        Command::Citest(a) => citest(a),
        Command::Discover(a) => discover(a),
        Command::Bench(a) => bench(a),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn read_net(path: &Path) -> Result<DiscreteBayesNet, Failure> {
    parse_bif(&read_text(path)?).map_err(|e| Failure::format(format!("{}: {e}", path.display())))
}

fn read_data(path: &Path) -> Result<Dataset, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure::io(path, e))?;
    Dataset::read_csv(BufReader::new(file)).map_err(|e| match e {
        BnError::Io(e) => Failure::io(path, e),
        other => Failure::format(format!("{}: {other}", path.display())),
    })
}

/// Writes `bytes` to `out`, or to standard output.
fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Outcome {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::io(p, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("reports serialize");
    v.push(b'\n');
    v
}

fn parse_method(s: &str) -> Result<CiMethod, Failure> {
    s.parse().map_err(|e: CiError| Failure::usage(e.to_string()))
}

fn config(opts: &TestOpts, seed: Option<u64>) -> Result<TestConfig, Failure> {
    let base = TestConfig::default();
    let mi_threshold = if opts.mi_threshold.eq_ignore_ascii_case("calibrated") {
        let default_seed = match base.mi_threshold {
            MiThreshold::Calibrated { seed, .. } => seed,
            MiThreshold::Fixed(_) => 0,
        };
        MiThreshold::Calibrated { trials: opts.calibration_trials, seed: seed.unwrap_or(default_seed) }
    } else {
        MiThreshold::Fixed(
            opts.mi_threshold
                .parse()
                .map_err(|_| Failure::usage(format!("--mi-threshold: '{}' is neither a number nor 'calibrated'", opts.mi_threshold)))?,
        )
    };
    let cfg = TestConfig {
        significance: opts.significance,
        alpha0: opts.alpha0,
        alpha1: opts.alpha1,
        bf_threshold: opts.bf_threshold,
        mi_threshold,
        alpha_policy: match opts.alpha_policy {
            PolicyArg::Fixed => AlphaPolicy::Fixed,
            PolicyArg::Map => AlphaPolicy::Map,
        },
        max_cond_set: opts.max_cond_set,
        ..base
    };
    cfg.validate()?;
    Ok(cfg)
}

fn sample(a: SampleArgs) -> Outcome {
    if a.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let net = read_net(&a.net)?;
    let data = forward_sample(&net, a.n, a.seed);
    let mut buf = Vec::new();
    data.write_csv(&mut buf).expect("writing to memory");
    emit(a.out.as_ref(), &buf)
}

#[derive(Serialize)]
struct Verdict {
    method: CiMethod,
    statistic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    df: Option<u64>,
    independent: bool,
}

fn citest(a: CitestArgs) -> Outcome {
    let method = parse_method(&a.method)?;
    let cfg = config(&a.test, a.seed)?;
    let data = read_data(&a.data)?;
    let index = |name: &str| data.index_of(name).ok_or_else(|| Failure::format(format!("unknown variable '{name}'")));
    let x = index(&a.x)?;
    let y = index(&a.y)?;
    let z = a.z.iter().map(|n| index(n)).collect::<Result<Vec<_>, _>>()?;
    if x == y {
        return Err(Failure::usage("x and y must be different variables"));
    }
    let d = conditional_test(&data, x, y, &z, method, &cfg)?;
    let v = Verdict { method, statistic: d.statistic, p_value: d.p_value, df: d.df, independent: d.independent };
    emit(None, &to_json(&v))
}

#[derive(Serialize)]
struct DiscoverStats<'a> {
    method: CiMethod,
    ci_test_count: u64,
    tests_by_order: &'a std::collections::BTreeMap<usize, u64>,
    orientation_conflicts: usize,
}

fn discover(a: DiscoverArgs) -> Outcome {
    let method = parse_method(&a.method)?;
    let cfg = config(&a.test, a.seed)?;
    let data = read_data(&a.data)?;
    if data.n_rows() == 0 {
        return Err(Failure::usage("dataset has no rows"));
    }
    let (g, stats) = learn_cpdag(&data, method, &cfg)?;
    log::info!("{} CI tests in {:?}", stats.ci_test_count, stats.elapsed);
    emit(a.out.as_ref(), edge_list(&g, data.names()).as_bytes())?;
    let s = DiscoverStats {
        method,
        ci_test_count: stats.ci_test_count,
        tests_by_order: &stats.tests_by_order,
        orientation_conflicts: stats.orientation_conflicts,
    };
    let json = to_json(&s);
    match a.stats.as_ref() {
        Some(p) => fs::write(p, json).map_err(|e| Failure::io(p, e)),
        None => io::stderr().write_all(&json).map_err(|e| Failure::io(Path::new("<stderr>"), e)),
    }
}

fn or_default<T: Clone>(given: &[T], default: &[T]) -> Vec<T> {
    if given.is_empty() {
        default.to_vec()
    } else {
        given.to_vec()
    }
}

fn bench(a: BenchArgs) -> Outcome {
    let kx = a.kx.unwrap_or(3);
    let ky = a.ky.unwrap_or(kx);
    let bytes = match a.experiment {
        Experiment::MiError => {
            let methods = or_default(&a.methods, &["mi_mle".into(), "mi_eb_map".into(), "mi_eb_fixed(1)".into()])
                .iter()
                .map(|m| m.parse::<MiEstimator>())
                .collect::<Result<Vec<_>, _>>()?;
            let design = PairDesign::new(kx, ky, a.gen_alpha, !a.independent);
            let sizes = or_default(&a.sizes, &[20, 50, 100, 200, 500]);
            to_json(&run_mi_error_bench(&sizes, a.trials.unwrap_or(1000), &methods, &design, a.seed)?)
        }
        Experiment::Type1Power => {
            let methods = or_default(&a.methods, &["g".into(), "bf_threshold".into(), "bf_chi2".into()])
                .iter()
                .map(|m| parse_method(m))
                .collect::<Result<Vec<_>, _>>()?;
            let design = Type1Design { kx, ky, gen_alpha: a.gen_alpha, matched: a.matched };
            let cfg = config(&a.test, Some(a.seed))?;
            let sizes = or_default(&a.sizes, &[50, 100, 1000]);
            to_json(&run_type1_power_bench(&sizes, a.trials.unwrap_or(2000), &methods, &design, &cfg, a.seed)?)
        }
        Experiment::Variance => {
            let theta = or_default(&a.theta, &[0.1, 0.2, 0.3, 0.4]);
            let n = a.sizes.first().copied().unwrap_or(20);
            let alpha = a.alphas.first().copied().unwrap_or(1.0);
            to_json(&run_variance_bench(&theta, n, a.trials.unwrap_or(10_000), alpha, a.seed)?)
        }
        Experiment::PolyaApprox => {
            let k = a.kx.unwrap_or(2);
            let specs: Vec<PolyaSpec> =
                or_default(&a.sizes, &[5, 10, 20, 50, 100]).into_iter().map(|n| PolyaSpec { k, n }).collect();
            let alphas = or_default(&a.alphas, &[0.5, 1.0, 2.0]);
            to_json(&run_polya_approx_bench(&specs, &alphas, a.trials.unwrap_or(1000), a.seed)?)
        }
        Experiment::StatDist => {
            let policy = match a.test.alpha_policy {
                PolicyArg::Fixed => AlphaPolicy::Fixed,
                PolicyArg::Map => AlphaPolicy::Map,
            };
            let trials = a.trials.unwrap_or(5000);
            let reports = or_default(&a.sizes, &[30, 1000])
                .into_iter()
                .map(|n| run_statistic_distribution_bench(kx, n, trials, policy, a.seed))
                .collect::<Result<Vec<_>, _>>()?;
            to_json(&reports)
        }
        Experiment::Discovery => {
            let net_path = a.net.as_ref().ok_or_else(|| Failure::usage("discovery needs --net"))?;
            let net = read_net(net_path)?;
            let methods = or_default(&a.methods, &["g".into(), "bf_chi2".into(), "mi_eb".into()])
                .iter()
                .map(|m| parse_method(m))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = config(&a.test, Some(a.seed))?;
            let sizes = or_default(&a.sizes, &[100, 300, 500]);
            to_json(&run_discovery_bench(&net, &sizes, a.runs.unwrap_or(10), &methods, &cfg, a.seed)?)
        }
    };
    emit(a.out.as_ref(), &bytes)
}
