use causalci_core::bnmodel::Dataset;
use causalci_core::citest::ContingencyTable;
use causalci_core::numstat::{dirichlet_sample_with, multinomial_sample_with};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{invalid, BenchError};

/// Shape and generator of a synthetic `X, Y` pair, without size or seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairDesign {
    pub kx: usize,
    pub ky: usize,
    /// Symmetric Dirichlet concentration for the generated parameters.
    pub gen_alpha: f64,
    pub dependent: bool,
}

impl PairDesign {
    pub fn new(kx: usize, ky: usize, gen_alpha: f64, dependent: bool) -> Self {
        PairDesign { kx, ky, gen_alpha, dependent }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.kx < 2 || self.ky < 2 {
            return invalid(format!("pair shape {}x{} needs at least two states each", self.kx, self.ky));
        }
        if !(self.gen_alpha > 0.0 && self.gen_alpha.is_finite()) {
            return invalid(format!("gen_alpha = {}", self.gen_alpha));
        }
        Ok(())
    }

    pub fn with_dependent(self, dependent: bool) -> Self {
        PairDesign { dependent, ..self }
    }

    /// Row-major joint `θ`: an outer product of two Dirichlet margins when
    /// independent, one Dirichlet over all cells otherwise.
    pub(crate) fn draw_theta<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        if self.dependent {
            dirichlet_sample_with(&vec![self.gen_alpha; self.kx * self.ky], rng).expect("validated alpha")
        } else {
            let px: Vec<f64> = dirichlet_sample_with(&vec![self.gen_alpha; self.kx], rng).expect("validated alpha");
            let py: Vec<f64> = dirichlet_sample_with(&vec![self.gen_alpha; self.ky], rng).expect("validated alpha");
            px.iter().flat_map(|&a| py.iter().map(move |&b| a * b)).collect()
        }
    }

    /// Draws `θ`, then a table of `n` observations from it. Returns the
    /// table and the true MI.
    pub(crate) fn draw_table<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> (ContingencyTable, f64) {
        let theta = self.draw_theta(rng);
        let mi = if self.dependent { true_mi(&theta, self.kx, self.ky) } else { 0.0 };
        let counts = multinomial_sample_with(n, &theta, rng);
        (ContingencyTable::from_counts(self.kx, self.ky, counts).expect("shape matches"), mi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticPairSpec {
    pub kx: usize,
    pub ky: usize,
    pub dependent: bool,
    pub gen_alpha: f64,
    pub n: usize,
    pub seed: u64,
}

impl SyntheticPairSpec {
    pub fn design(&self) -> PairDesign {
        PairDesign::new(self.kx, self.ky, self.gen_alpha, self.dependent)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticPair {
    /// Two columns named `X` and `Y`.
    pub data: Dataset,
    pub independent: bool,
    pub true_mi: f64,
    /// Row-major joint distribution the rows were drawn from.
    pub theta: Vec<f64>,
}

/// Draws a parameter set and `n` i.i.d. rows for one synthetic pair.
pub fn gen_synthetic_pair(spec: &SyntheticPairSpec) -> Result<SyntheticPair, BenchError> {
    let design = spec.design();
    design.validate()?;
    if spec.n == 0 {
        return invalid("a synthetic pair needs at least one row");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let theta = design.draw_theta(&mut rng);
    let true_mi = if spec.dependent { true_mi(&theta, spec.kx, spec.ky) } else { 0.0 };
    let mut cdf = Vec::with_capacity(theta.len());
    let mut acc = 0.0;
    for &p in &theta {
        acc += p;
        cdf.push(acc);
    }
    let (mut xs, mut ys) = (Vec::with_capacity(spec.n), Vec::with_capacity(spec.n));
    for _ in 0..spec.n {
        let u = rng.random::<f64>() * acc;
        let cell = cdf.iter().position(|&c| u < c).unwrap_or(theta.len() - 1);
        xs.push((cell / spec.ky) as u16);
        ys.push((cell % spec.ky) as u16);
    }
    let data = Dataset::new(vec!["X".into(), "Y".into()], vec![spec.kx, spec.ky], vec![xs, ys])?;
    Ok(SyntheticPair { data, independent: !spec.dependent, true_mi, theta })
}

/// Mutual information (nats) of a row-major `kx × ky` joint distribution.
pub fn true_mi(theta: &[f64], kx: usize, ky: usize) -> f64 {
    let mut px = vec![0.0; kx];
    let mut py = vec![0.0; ky];
    for i in 0..kx {
        for j in 0..ky {
            px[i] += theta[i * ky + j];
            py[j] += theta[i * ky + j];
        }
    }
    let mut mi = 0.0;
    for i in 0..kx {
        for j in 0..ky {
            let p = theta[i * ky + j];
            if p > 0.0 {
                mi += p * (p / (px[i] * py[j])).ln();
            }
        }
    }
    mi.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(dependent: bool, seed: u64) -> SyntheticPairSpec {
        SyntheticPairSpec { kx: 3, ky: 2, dependent, gen_alpha: 1.0, n: 200, seed }
    }

    #[test]
    fn independent_pair_has_zero_mi() {
        let p = gen_synthetic_pair(&spec(false, 4)).unwrap();
        assert_eq!(p.true_mi, 0.0);
        assert!(p.independent);
        assert_eq!(p.data.n_rows(), 200);
        assert_eq!(p.data.cardinalities(), &[3, 2]);
    }

    #[test]
    fn reproducible() {
        assert_eq!(gen_synthetic_pair(&spec(true, 9)).unwrap(), gen_synthetic_pair(&spec(true, 9)).unwrap());
        assert_ne!(gen_synthetic_pair(&spec(true, 9)).unwrap(), gen_synthetic_pair(&spec(true, 10)).unwrap());
    }

    #[test]
    fn mi_of_known_joints() {
        assert!((true_mi(&[0.5, 0.0, 0.0, 0.5], 2, 2) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(true_mi(&[0.25; 4], 2, 2), 0.0);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(gen_synthetic_pair(&SyntheticPairSpec { kx: 1, ..spec(true, 0) }).is_err());
        assert!(gen_synthetic_pair(&SyntheticPairSpec { n: 0, ..spec(true, 0) }).is_err());
        assert!(gen_synthetic_pair(&SyntheticPairSpec { gen_alpha: 0.0, ..spec(true, 0) }).is_err());
    }
}
