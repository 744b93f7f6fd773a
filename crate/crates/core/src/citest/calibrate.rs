//! Simulated null thresholds for the mutual-information tests.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::citest::{mi_eb, CiError, ContingencyTable};
use crate::numstat::{dirichlet_sample_with, multinomial_sample_with};

/// Draws a `kx × ky` table of `n` observations from independent margins,
/// each margin drawn from a uniform Dirichlet.
pub(crate) fn null_table(kx: usize, ky: usize, n: u64, rng: &mut ChaCha8Rng) -> ContingencyTable {
    let px: Vec<f64> = dirichlet_sample_with(&vec![1.0; kx], rng).expect("valid alpha");
    let py: Vec<f64> = dirichlet_sample_with(&vec![1.0; ky], rng).expect("valid alpha");
    let rows = multinomial_sample_with(n, &px, rng);
    let mut counts = Vec::with_capacity(kx * ky);
    for &ni in &rows {
        counts.extend(multinomial_sample_with(ni, &py, rng));
    }
    ContingencyTable::from_counts(kx, ky, counts).expect("shape matches")
}

/// `(1 − target)` empirical quantile of MAP empirical-Bayes MI over
/// `trials` simulated null tables of `n` observations. Declaring
/// independence when MI falls below the returned value rejects a true
/// null at rate close to `target`. Trial `t` uses ChaCha8 stream `t` of
/// `seed`.
pub fn calibrate_mi_threshold(
    kx: usize,
    ky: usize,
    n: u64,
    target: f64,
    trials: usize,
    seed: u64,
) -> Result<f64, CiError> {
    if kx < 2 || ky < 2 {
        return Err(CiError::Invalid(format!("calibration needs at least 2x2, got {kx}x{ky}")));
    }
    if !(target > 0.0 && target <= 1.0) {
        return Err(CiError::Invalid(format!("target = {target}")));
    }
    if trials < 100 {
        return Err(CiError::Invalid(format!("trials = {trials}, need at least 100")));
    }
    let base = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = base.clone();
        rng.set_stream(t as u64);
        let table = null_table(kx, ky, n, &mut rng);
        values.push(mi_eb::<f64>(&table, None)?.value);
    }
    values.sort_by(f64::total_cmp);
    let k = ((1.0 - target) * trials as f64).ceil() as usize;
    Ok(values[k.min(trials - 1)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    kx: usize,
    ky: usize,
    bucket: i64,
    target_bits: u64,
    trials: usize,
    seed: u64,
}

/// Thread-safe memo of calibrated thresholds keyed by table shape and a
/// half-octave bucket of the per-stratum sample size.
#[derive(Debug, Default)]
pub struct ThresholdCache {
    map: Mutex<HashMap<Key, f64>>,
}

impl ThresholdCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bucket index and its representative sample size for `n`.
    pub fn bucket(n: f64) -> (i64, u64) {
        let b = (2.0 * n.max(1.0).log2()).round() as i64;
        (b, (2f64.powf(b as f64 / 2.0).round() as u64).max(1))
    }

    /// Calibrated threshold for a `kx × ky` table with about `n` observations.
    pub fn threshold(&self, kx: usize, ky: usize, n: f64, target: f64, trials: usize, seed: u64) -> Result<f64, CiError> {
        let (bucket, rep) = Self::bucket(n);
        let key = Key { kx, ky, bucket, target_bits: target.to_bits(), trials, seed };
        if let Some(&v) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let mixed = mix(seed, &[kx as u64, ky as u64, bucket as u64]);
        let v = calibrate_mi_threshold(kx, ky, rep, target, trials, mixed)?;
        self.map.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// SplitMix64 folding of `parts` into `seed`. Used to derive independent
/// seeds for sub-experiments.
pub fn mix(seed: u64, parts: &[u64]) -> u64 {
    let mut h = seed;
    for &p in parts {
        h ^= p.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(h << 6).wrapping_add(h >> 2);
        let mut z = h.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_target_is_minimum() {
        let all = calibrate_mi_threshold(2, 3, 40, 1.0, 200, 3).unwrap();
        let some = calibrate_mi_threshold(2, 3, 40, 0.05, 200, 3).unwrap();
        assert!(all <= some);
    }

    #[test]
    fn validation() {
        assert!(calibrate_mi_threshold(2, 2, 10, 0.05, 99, 0).is_err());
        assert!(calibrate_mi_threshold(1, 2, 10, 0.05, 100, 0).is_err());
        assert!(calibrate_mi_threshold(2, 2, 10, 0.0, 100, 0).is_err());
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            calibrate_mi_threshold(3, 3, 30, 0.05, 150, 8).unwrap(),
            calibrate_mi_threshold(3, 3, 30, 0.05, 150, 8).unwrap()
        );
    }

    #[test]
    fn cache_reuses_bucket() {
        let cache = ThresholdCache::new();
        let a = cache.threshold(2, 2, 100.0, 0.05, 100, 1).unwrap();
        let b = cache.threshold(2, 2, 101.0, 0.05, 100, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
        cache.threshold(2, 2, 400.0, 0.05, 100, 1).unwrap();
        assert_eq!(cache.len(), 2);
    }

    #[test]
    fn buckets() {
        assert_eq!(ThresholdCache::bucket(1.0), (0, 1));
        assert_eq!(ThresholdCache::bucket(0.2), (0, 1));
        assert_eq!(ThresholdCache::bucket(100.0).1, 91);
        assert_eq!(ThresholdCache::bucket(128.0).1, 128);
    }
}
