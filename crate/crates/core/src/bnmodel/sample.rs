//! Ancestral sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bnmodel::{Dataset, DiscreteBayesNet};

/// Index drawn from the categorical distribution `probs` using `u ∈ [0, 1)`.
pub(crate) fn categorical(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = k;
            if u < acc {
                return k;
            }
        }
    }
    last
}

/// Draws `n` rows in topological order. Row `r` uses its own ChaCha8
/// stream, so any subset of rows can be regenerated independently.
pub fn forward_sample(net: &DiscreteBayesNet, n: usize, seed: u64) -> Dataset {
    let vars = net.len();
    let base = ChaCha8Rng::seed_from_u64(seed);
    let mut columns = vec![Vec::with_capacity(n); vars];
    let mut assignment = vec![0usize; vars];
    for row in 0..n {
        let mut rng = base.clone();
        rng.set_stream(row as u64);
        rng.set_word_pos(0);
        for &v in net.topological_order() {
            let u: f64 = rng.random();
            assignment[v] = categorical(net.row_for(v, &assignment), u);
        }
        for (col, &s) in columns.iter_mut().zip(&assignment) {
            col.push(s as u16);
        }
    }
    let mut data = Dataset::new(net.names(), net.cardinalities(), columns).expect("sampled states in range");
    data.seed = Some(seed);
    data
}
