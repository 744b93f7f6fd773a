//! Larger benchmark networks built from copies of a base network.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bnmodel::{BnError, Cpt, DiscreteBayesNet, Variable};
use crate::numstat::dirichlet_sample_with;

const MAX_PARENTS_FOR_LINK: usize = 4;

/// Concatenates `copies` of `base` (node `X` of copy `c` is named `X_c`,
/// counting from 1) and adds `links` random edges from an earlier copy to a
/// later one, so the result stays acyclic. A linked child gets the new
/// parent as its last parent; each of its rows becomes an even mixture of
/// the original row and a uniform Dirichlet draw.
pub fn tile_network(
    base: &DiscreteBayesNet,
    copies: usize,
    links: usize,
    seed: u64,
) -> Result<DiscreteBayesNet, BnError> {
    if copies < 2 && links > 0 {
        return Err(BnError::Invalid("links need at least two copies".into()));
    }
    let m = base.len();
    let mut vars = Vec::with_capacity(m * copies);
    let mut cpts = Vec::with_capacity(m * copies);
    for c in 0..copies {
        for v in 0..m {
            let var = base.variable(v);
            vars.push(Variable { name: format!("{}_{}", var.name, c + 1), states: var.states.clone() });
            let cpt = base.cpt(v);
            cpts.push(Cpt {
                parents: cpt.parents.iter().map(|&p| p + c * m).collect(),
                rows: cpt.rows.clone(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut added = 0;
    while added < links {
        let c1 = rng.random_range(0..copies - 1);
        let c2 = rng.random_range(c1 + 1..copies);
        let u = c1 * m + rng.random_range(0..m);
        let v = c2 * m + rng.random_range(0..m);
        if cpts[v].parents.len() >= MAX_PARENTS_FOR_LINK || cpts[v].parents.contains(&u) {
            continue;
        }
        let ku = vars[u].cardinality();
        let kv = vars[v].cardinality();
        let old = std::mem::take(&mut cpts[v].rows);
        let mut rows = Vec::with_capacity(old.len() * ku);
        for row in &old {
            for _ in 0..ku {
                let noise: Vec<f64> = dirichlet_sample_with(&vec![1.0; kv], &mut rng).expect("valid alpha");
                let mixed: Vec<f64> = row.iter().zip(&noise).map(|(a, b)| 0.5 * a + 0.5 * b).collect();
                let sum: f64 = mixed.iter().sum();
                rows.push(mixed.iter().map(|p| p / sum).collect());
            }
        }
        cpts[v].rows = rows;
        cpts[v].parents.push(u);
        added += 1;
    }
    DiscreteBayesNet::new(format!("{}x{copies}", base.name()), vars, cpts)
}
