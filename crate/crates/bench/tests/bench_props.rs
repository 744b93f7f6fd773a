use std::fs;
use std::path::PathBuf;

use causalci_bench::*;
use causalci_core::bnmodel::{dag_to_cpdag, parse_bif, Dag};
use causalci_core::citest::{mi_eb, AlphaPolicy, CiMethod, ContingencyTable, TestConfig};
use proptest::prelude::*;

fn asia() -> causalci_core::bnmodel::DiscreteBayesNet {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/networks/asia.bif");
    parse_bif(&fs::read_to_string(p).unwrap()).unwrap()
}

fn table(kx: usize, ky: usize, c: &[u64]) -> ContingencyTable {
    ContingencyTable::from_counts(kx, ky, c.to_vec()).unwrap()
}

#[test]
fn closed_form_mi_matches_monte_carlo() {
    let cases: [(usize, usize, &[u64], f64); 4] = [
        (2, 2, &[3, 1, 0, 4], 1.0),
        (2, 3, &[10, 2, 0, 1, 7, 5], 0.5),
        (3, 3, &[0, 0, 1, 2, 0, 0, 0, 3, 0], 2.0),
        (2, 2, &[40, 10, 15, 35], 0.1),
    ];
    for (i, (kx, ky, c, a)) in cases.into_iter().enumerate() {
        let t = table(kx, ky, c);
        let exact = mi_eb::<f64>(&t, Some(a)).unwrap().value;
        let (mean, se) = mc_mi_posterior_oracle(&t, a, 200_000, i as u64).unwrap();
        assert!((exact - mean).abs() < 5.0 * se + 1e-6, "{c:?}: {exact} vs {mean} ± {se}");
    }
}

#[test]
fn reports_are_deterministic_and_serialize() {
    let design = PairDesign::new(3, 3, 1.0, true);
    let methods = [MiEstimator::Mle, MiEstimator::EbMap, MiEstimator::EbFixed(1.0)];
    let a = run_mi_error_bench(&[20, 50], 50, &methods, &design, 7).unwrap();
    let b = run_mi_error_bench(&[20, 50], 50, &methods, &design, 7).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.configs.len(), 6);
    let json = serde_json::to_string(&a).unwrap();
    let back: BenchmarkReport = serde_json::from_str(&json).unwrap();
    assert_eq!(a, back);
    let c = run_mi_error_bench(&[20, 50], 50, &methods, &design, 8).unwrap();
    assert_ne!(a, c);
}

#[test]
fn single_run_has_zero_std() {
    let net = asia();
    let r = run_discovery_bench(&net, &[200], 1, &[CiMethod::G], &TestConfig::default(), 3).unwrap();
    let rec = r.find(200, "g", "shd").unwrap();
    assert_eq!(rec.runs, 1);
    assert_eq!(rec.metric_std, 0.0);
    assert!(rec.ci_tests_mean.unwrap() > 0.0);
}

#[test]
fn oracle_discovery_has_zero_shd() {
    let net = asia();
    let r = run_discovery_bench(&net, &[50, 100], 2, &[CiMethod::DsepOracle], &TestConfig::default(), 1).unwrap();
    for n in [50, 100] {
        let rec = r.find(n, "dsep_oracle", "shd").unwrap();
        assert_eq!((rec.metric_mean, rec.metric_std), (0.0, 0.0));
    }
}

#[test]
fn g_type1_near_nominal_at_large_n() {
    let r = run_type1_power_bench(&[10_000], 2000, &[CiMethod::G], &Type1Design::default(), &TestConfig::default(), 5)
        .unwrap();
    let t1 = r.find(10_000, "g", "type1").unwrap().metric_mean;
    assert!((0.03..=0.07).contains(&t1), "type1 = {t1}");
    assert!(r.find(10_000, "g", "power").unwrap().metric_mean > 0.9);
}

#[test]
fn never_rejecting_test_has_no_type1_or_power() {
    // With a tiny η the Bayes factor always favours independence.
    let config = TestConfig { bf_threshold: 1e-300, ..TestConfig::default() };
    let r = run_type1_power_bench(&[30, 200], 200, &[CiMethod::BfThreshold], &Type1Design::default(), &config, 2)
        .unwrap();
    for n in [30, 200] {
        assert_eq!(r.find(n, "bf_threshold", "type1").unwrap().metric_mean, 0.0);
        assert_eq!(r.find(n, "bf_threshold", "power").unwrap().metric_mean, 0.0);
    }
}

#[test]
fn matched_type1_is_near_significance() {
    let design = Type1Design { matched: true, ..Type1Design::default() };
    let methods = [CiMethod::G, CiMethod::BfChi2, CiMethod::BfThreshold];
    let r = run_type1_power_bench(&[100], 2000, &methods, &design, &TestConfig::default(), 9).unwrap();
    for m in ["g", "bf_chi2", "bf_threshold"] {
        let t1 = r.find(100, m, "type1").unwrap().metric_mean;
        assert!((0.03..=0.07).contains(&t1), "{m}: {t1}");
        assert!(r.find(100, m, "critical_value").is_some());
    }
}

#[test]
fn variance_matches_closed_forms() {
    let r = run_variance_bench(&[0.1, 0.2, 0.3, 0.4], 20, 20_000, 1.0, 4).unwrap();
    assert_eq!(r.states.len(), 4);
    for s in &r.states {
        assert!((s.mle_var / s.mle_var_analytic - 1.0).abs() < 0.05, "{s:?}");
        assert!((s.bayes_var / s.bayes_var_analytic - 1.0).abs() < 0.05, "{s:?}");
        assert!(s.bayes_var < s.mle_var);
    }
    let degenerate = run_variance_bench(&[1.0, 0.0], 10, 100, 1.0, 0).unwrap();
    for s in &degenerate.states {
        assert_eq!((s.mle_var, s.bayes_var), (0.0, 0.0));
    }
}

#[test]
fn polya_error_is_finite_and_reproducible() {
    let specs: Vec<PolyaSpec> = [5, 20, 100].iter().map(|&n| PolyaSpec { k: 2, n }).collect();
    let r = run_polya_approx_bench(&specs, &[0.5, 1.0], 300, 6).unwrap();
    assert_eq!(r, run_polya_approx_bench(&specs, &[0.5, 1.0], 300, 6).unwrap());
    assert_eq!(r.configs.len(), 6);
    assert!(r.configs.iter().all(|c| c.metric_mean.is_finite() && c.metric_mean >= 0.0));
    let uniform = causalci_core::numstat::CountSeq::new(vec![5, 5, 5, 5]).unwrap();
    assert!(polya_approx_error(&uniform, 1.0).unwrap().is_finite());
}

#[test]
fn stat_dist_needs_enough_trials() {
    assert!(run_statistic_distribution_bench(3, 100, 100, AlphaPolicy::Fixed, 0).is_err());
    let r = run_statistic_distribution_bench(3, 1000, 2000, AlphaPolicy::Fixed, 1).unwrap();
    assert_eq!(r.df, 4);
    for m in [CiMethod::G, CiMethod::BfChi2] {
        let row = r.row(m).unwrap();
        assert!(row.sup_distance < 0.08, "{m}: {}", row.sup_distance);
    }
}

#[test]
fn synthetic_pairs_reproduce() {
    let spec = SyntheticPairSpec { kx: 3, ky: 4, dependent: true, gen_alpha: 1.0, n: 300, seed: 12 };
    let a = gen_synthetic_pair(&spec).unwrap();
    assert_eq!(a, gen_synthetic_pair(&spec).unwrap());
    assert_eq!(a.data.n_rows(), 300);
    assert!(a.true_mi > 0.0);
    assert!((a.theta.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let ind = gen_synthetic_pair(&SyntheticPairSpec { dependent: false, ..spec }).unwrap();
    assert_eq!(ind.true_mi, 0.0);
    assert!(ind.independent);
    assert!(gen_synthetic_pair(&SyntheticPairSpec { n: 0, ..spec }).is_err());
}

fn dag_strategy(n: usize) -> impl Strategy<Value = Dag> {
    prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
        let mut edges = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask[k] {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        Dag::new(n, &edges).unwrap()
    })
}

proptest! {
    #[test]
    fn shd_is_a_metric(a in dag_strategy(6), b in dag_strategy(6), c in dag_strategy(6)) {
        let (a, b, c) = (dag_to_cpdag(&a), dag_to_cpdag(&b), dag_to_cpdag(&c));
        prop_assert_eq!(shd(&a, &b).unwrap(), shd(&b, &a).unwrap());
        prop_assert_eq!(shd(&a, &a).unwrap(), 0);
        prop_assert!(shd(&a, &c).unwrap() <= shd(&a, &b).unwrap() + shd(&b, &c).unwrap());
        prop_assert_eq!(shd(&a, &b).unwrap() == 0, a == b);
    }

    #[test]
    fn true_mi_nonnegative_and_zero_for_products(p in prop::collection::vec(0.01f64..1.0, 3), q in prop::collection::vec(0.01f64..1.0, 2)) {
        let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
        let theta: Vec<f64> = p.iter().flat_map(|a| q.iter().map(move |b| a * b / (sp * sq))).collect();
        prop_assert!(true_mi(&theta, 3, 2).abs() < 1e-12);
        let mut skew = theta.clone();
        skew[0] += 0.1;
        let s: f64 = skew.iter().sum();
        skew.iter_mut().for_each(|v| *v /= s);
        prop_assert!(true_mi(&skew, 3, 2) >= -1e-15);
    }
}
