use causalci_core::citest::ContingencyTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::synth::true_mi;
use crate::{invalid, BenchError};

/// Monte-Carlo posterior mean of the plug-in MI, with
/// `θ ~ Dirichlet(n_ij + alpha)` over the joint cells. Returns the mean and
/// its standard error.
pub fn mc_mi_posterior_oracle(
    table: &ContingencyTable,
    alpha: f64,
    draws: usize,
    seed: u64,
) -> Result<(f64, f64), BenchError> {
    if draws < 10_000 {
        return invalid(format!("draws = {draws}, need at least 10^4"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return invalid(format!("alpha = {alpha}"));
    }
    let (kx, ky) = (table.kx(), table.ky());
    // Shapes below one are boosted: G(a) = G(a + 1) · U^(1/a), kept in logs.
    let gammas: Vec<(Gamma<f64>, f64)> = table
        .counts()
        .iter()
        .map(|&n| {
            let a = n as f64 + alpha;
            if a < 1.0 {
                (Gamma::new(a + 1.0, 1.0).unwrap(), a)
            } else {
                (Gamma::new(a, 1.0).unwrap(), f64::INFINITY)
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut logs = vec![0.0; gammas.len()];
    let mut theta = vec![0.0; gammas.len()];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..draws {
        for (l, (g, boost)) in logs.iter_mut().zip(&gammas) {
            *l = g.sample(&mut rng).ln();
            if boost.is_finite() {
                *l += (1.0 - rng.random::<f64>()).ln() / boost;
            }
        }
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for (t, &l) in theta.iter_mut().zip(&logs) {
            *t = (l - max).exp();
            total += *t;
        }
        theta.iter_mut().for_each(|t| *t /= total);
        let mi = true_mi(&theta, kx, ky);
        sum += mi;
        sum_sq += mi * mi;
    }
    let n = draws as f64;
    let mean = sum / n;
    let var = ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}
