use serde::{Deserialize, Serialize};

/// Aggregate of one experiment: one record per (size, method, metric).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub experiment: String,
    pub seed: u64,
    pub configs: Vec<ConfigRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub size: usize,
    pub method: String,
    /// What `metric_mean` measures, e.g. `shd`, `abs_error`, `type1`.
    pub metric: String,
    pub metric_mean: f64,
    /// Sample standard deviation over runs; 0 for a single run.
    pub metric_std: f64,
    pub runs: usize,
    /// Mean CI-test count, for discovery experiments.
    pub ci_tests_mean: Option<f64>,
}

impl BenchmarkReport {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        BenchmarkReport { experiment: experiment.into(), seed, configs: Vec::new() }
    }

    /// First record matching `size`, `method` and `metric`.
    pub fn find(&self, size: usize, method: &str, metric: &str) -> Option<&ConfigRecord> {
        self.configs.iter().find(|c| c.size == size && c.method == method && c.metric == metric)
    }

    pub(crate) fn push(&mut self, size: usize, method: &str, metric: &str, acc: &MeanStd, ci_tests_mean: Option<f64>) {
        self.configs.push(ConfigRecord {
            size,
            method: method.to_string(),
            metric: metric.to_string(),
            metric_mean: acc.mean(),
            metric_std: acc.std(),
            runs: acc.count(),
            ci_tests_mean,
        });
    }
}

/// Running sums for a mean and sample standard deviation. Values are
/// accumulated in the order given, so results are reproducible.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanStd {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl MeanStd {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    pub fn std(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let var = (self.sum_sq - self.sum * self.sum / n) / (n - 1.0);
        var.max(0.0).sqrt()
    }
}

impl FromIterator<f64> for MeanStd {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = MeanStd::new();
        for v in iter {
            acc.push(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value_has_zero_std() {
        let acc: MeanStd = [3.5].into_iter().collect();
        assert_eq!(acc.mean(), 3.5);
        assert_eq!(acc.std(), 0.0);
    }

    #[test]
    fn sample_std() {
        let acc: MeanStd = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0].into_iter().collect();
        assert_eq!(acc.mean(), 5.0);
        assert!((acc.std() - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
    }
}
