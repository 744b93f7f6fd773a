//! Dirichlet draws through normalized gamma variates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Gamma};

use crate::numstat::NumError;
use crate::scalar::Scalar;

/// Draws one probability vector from `Dirichlet(alpha)` using a ChaCha8
/// generator seeded with `seed`.
pub fn dirichlet_sample<T: Scalar>(alpha: &[T], seed: u64) -> Result<Vec<T>, NumError> {
    dirichlet_sample_with(alpha, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Draws one probability vector from `Dirichlet(alpha)` with a caller
/// supplied generator.
///
/// Gamma variates are formed in log space as `ln G(a + 1) + ln(U) / a`, so
/// small concentrations do not underflow to an all-zero vector.
pub fn dirichlet_sample_with<T: Scalar, R: Rng + ?Sized>(
    alpha: &[T],
    rng: &mut R,
) -> Result<Vec<T>, NumError> {
    if alpha.is_empty() {
        return Err(NumError::domain("dirichlet_sample", 0.0, "at least one component"));
    }
    let mut logs = Vec::with_capacity(alpha.len());
    for &a in alpha {
        let a = a.to_f64().unwrap_or(f64::NAN);
        if !a.is_finite() || a <= 0.0 {
            return Err(NumError::domain("dirichlet_sample", a, "alpha > 0"));
        }
        let g = Gamma::new(a + 1.0, 1.0).expect("valid gamma parameters");
        let u: f64 = 1.0 - rng.random::<f64>();
        logs.push(g.sample(rng).ln() + u.ln() / a);
    }
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    Ok(weights.iter().map(|&w| T::lit(w / total)).collect())
}

/// Counts of `n` categorical draws with probabilities `probs`, sampled as a
/// chain of conditional binomials. `probs` must sum to one.
pub fn multinomial_sample_with<R: Rng + ?Sized>(n: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut out = vec![0; probs.len()];
    let mut left = n;
    let mut mass = 1.0;
    for (k, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if k + 1 == probs.len() {
            out[k] = left;
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let draw = Binomial::new(left, q).expect("probability in [0, 1]").sample(rng);
        out[k] = draw;
        left -= draw;
        mass -= p;
    }
    out
}
