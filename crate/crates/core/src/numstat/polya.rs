//! Polya (Dirichlet-multinomial) likelihood under a symmetric Dirichlet
//! prior and the maximum-likelihood (uniform-prior MAP) concentration.

use serde::{Deserialize, Serialize};

use crate::numstat::special::{digamma, ln_gamma, ln_rising};
use crate::numstat::NumError;
use crate::scalar::Scalar;

/// Occurrence counts of the `K` states of one discrete variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountSeq {
    counts: Vec<u64>,
    total: u64,
}

impl CountSeq {
    /// Wraps a count vector. At least one state is required.
    pub fn new(counts: Vec<u64>) -> Result<Self, NumError> {
        if counts.is_empty() {
            return Err(NumError::domain("CountSeq", 0.0, "K >= 1 states"));
        }
        let total = counts.iter().sum();
        Ok(CountSeq { counts, total })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of states `K`.
    pub fn k(&self) -> usize {
        self.counts.len()
    }

    /// Total `N = Σ n_k`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Non-zero counts in ascending order. Zero-count states contribute
    /// nothing to the α-dependent part of the likelihood.
    fn sorted_nonzero(&self) -> Vec<u64> {
        let mut nz: Vec<u64> = self.counts.iter().copied().filter(|&n| n > 0).collect();
        nz.sort_unstable();
        nz
    }
}

impl TryFrom<Vec<u64>> for CountSeq {
    type Error = NumError;

    fn try_from(counts: Vec<u64>) -> Result<Self, Self::Error> {
        CountSeq::new(counts)
    }
}

/// Log of the Polya probability of `counts` under a symmetric Dirichlet(α)
/// prior, including the multinomial coefficient `N! / Π n_k!`.
pub fn log_polya<T: Scalar>(counts: &CountSeq, alpha: T) -> Result<T, NumError> {
    if !alpha.is_finite() || alpha <= T::zero() {
        return Err(NumError::domain("log_polya", alpha, "alpha > 0"));
    }
    let n = T::from_count(counts.total);
    let k = T::from_usize(counts.k()).unwrap();
    let mut acc = ln_gamma(n + T::one())? + ln_gamma(k * alpha)? - ln_gamma(k * alpha + n)?;
    for &c in &counts.counts {
        let c = T::from_count(c);
        acc += ln_gamma(alpha + c)? - ln_gamma(alpha)? - ln_gamma(c + T::one())?;
    }
    Ok(acc)
}

/// α-dependent part of `log_polya` over pre-sorted non-zero counts.
fn alpha_objective<T: Scalar>(nonzero: &[u64], k: usize, total: u64, alpha: T) -> T {
    let k = T::from_usize(k).unwrap();
    let mut acc = -ln_rising(k * alpha, total).expect("positive alpha");
    for &c in nonzero {
        acc += ln_rising(alpha, c).expect("positive alpha");
    }
    acc
}

/// Search interval for the symmetric concentration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaBounds {
    pub min: f64,
    pub max: f64,
}

impl Default for AlphaBounds {
    fn default() -> Self {
        AlphaBounds { min: 1e-4, max: 1e4 }
    }
}

/// Which route produced the reported α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaSource {
    /// The fixed-point iteration agreed with the bracketing search.
    FixedPoint,
    /// The bracketing search overrode the fixed-point iterate.
    Safeguard,
}

/// Result of [`estimate_alpha_map`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaEstimate<T = f64> {
    pub alpha: T,
    /// Whether the fixed-point iteration met its step tolerance.
    pub converged: bool,
    pub iterations: usize,
    /// α sits on one of the bounds: the likelihood has no interior maximum.
    pub clamped: bool,
    pub source: AlphaSource,
    /// Final iterate of the fixed-point update, before cross-checking.
    pub fixed_point_alpha: T,
}

const FIXED_POINT_TOL: f64 = 1e-8;
const FIXED_POINT_MAX_ITER: usize = 1000;
const AGREEMENT_TOL: f64 = 1e-4;
const GRID_POINTS: usize = 33;
const GOLDEN_TOL: f64 = 1e-10;
const GOLDEN_MAX_ITER: usize = 200;

/// Maximizes `log_polya(counts, α)` over the default bounds `[1e-4, 1e4]`.
pub fn estimate_alpha_map<T: Scalar>(counts: &CountSeq) -> Result<AlphaEstimate<T>, NumError> {
    estimate_alpha_map_with(counts, AlphaBounds::default())
}

/// Maximizes `log_polya(counts, α)` over `bounds`.
///
/// The multiplicative fixed-point update
/// `α ← α (Σ_k ψ(α + n_k) − K ψ(α)) / (K ψ(Kα + N) − ψ(Kα))`
/// is iterated from α = 1, then checked against a golden-section search
/// over `ln α`, bracketed by a coarse grid. The search result is returned
/// whenever the two differ by more than `1e-4` relative.
pub fn estimate_alpha_map_with<T: Scalar>(
    counts: &CountSeq,
    bounds: AlphaBounds,
) -> Result<AlphaEstimate<T>, NumError> {
    if counts.k() < 2 {
        return Err(NumError::Degenerate("alpha estimation needs K >= 2"));
    }
    if counts.total == 0 {
        return Err(NumError::Degenerate("alpha estimation needs N >= 1"));
    }
    if !(bounds.min > 0.0 && bounds.min < bounds.max && bounds.max.is_finite()) {
        return Err(NumError::domain("alpha bounds", bounds.min, "0 < min < max < inf"));
    }
    let nonzero = counts.sorted_nonzero();
    let (lo, hi) = (T::lit(bounds.min), T::lit(bounds.max));

    let (fp_alpha, iterations, converged) = fixed_point(&nonzero, counts.k(), counts.total, lo, hi);
    let (safe_alpha, clamped) = bracketed_search(&nonzero, counts.k(), counts.total, lo, hi);

    let agree = converged && ((fp_alpha - safe_alpha).abs() <= T::lit(AGREEMENT_TOL) * safe_alpha);
    let (alpha, source) = if agree && !clamped {
        (fp_alpha, AlphaSource::FixedPoint)
    } else {
        (safe_alpha, AlphaSource::Safeguard)
    };
    Ok(AlphaEstimate {
        alpha,
        converged,
        iterations,
        clamped,
        source,
        fixed_point_alpha: fp_alpha,
    })
}

fn fixed_point<T: Scalar>(nonzero: &[u64], k: usize, total: u64, lo: T, hi: T) -> (T, usize, bool) {
    let kf = T::from_usize(k).unwrap();
    let n = T::from_count(total);
    let tol = T::lit(FIXED_POINT_TOL);
    let mut alpha = T::one().max(lo).min(hi);
    for it in 1..=FIXED_POINT_MAX_ITER {
        let psi_a = digamma(alpha).expect("positive alpha");
        let mut num = T::zero();
        for &c in nonzero {
            num += digamma(alpha + T::from_count(c)).expect("positive") - psi_a;
        }
        let den = kf * digamma(alpha * kf + n).expect("positive") - digamma(kf * alpha).expect("positive");
        let next = alpha * num / den;
        if !next.is_finite() || next <= T::zero() {
            return (alpha, it, false);
        }
        let next = next.max(lo).min(hi);
        if (next - alpha).abs() < tol {
            return (next, it, true);
        }
        alpha = next;
    }
    (alpha, FIXED_POINT_MAX_ITER, false)
}

/// Golden-section maximization over `ln α` inside the best coarse-grid cell.
fn bracketed_search<T: Scalar>(nonzero: &[u64], k: usize, total: u64, lo: T, hi: T) -> (T, bool) {
    let f = |u: T| alpha_objective(nonzero, k, total, u.exp());
    let (ulo, uhi) = (lo.ln(), hi.ln());
    let step = (uhi - ulo) / T::from_usize(GRID_POINTS - 1).unwrap();
    let grid_at = |i: usize| {
        if i == GRID_POINTS - 1 {
            uhi
        } else {
            ulo + step * T::from_usize(i).unwrap()
        }
    };
    let mut best = 0;
    let mut best_val = T::neg_infinity();
    for i in 0..GRID_POINTS {
        let v = f(grid_at(i));
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let mut a = grid_at(best.saturating_sub(1));
    let mut b = grid_at((best + 1).min(GRID_POINTS - 1));

    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    // The tolerance cannot go below a few ulps of ln α; f32 stops earlier.
    let scale = T::one().max(a.abs()).max(b.abs());
    let tol = T::lit(GOLDEN_TOL).max(T::lit(4.0) * T::EPS * scale);
    let mut iters = 0;
    while (b - a).abs() > tol && iters < GOLDEN_MAX_ITER {
        iters += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = (a + b) * T::lit(0.5);
    let mut u = mid;
    let mut val = f(mid);
    for cand in [ulo, uhi] {
        let v = f(cand);
        if v > val {
            val = v;
            u = cand;
        }
    }
    let edge = T::lit(1e-8).max(T::lit(8.0) * T::EPS * scale);
    if (u - ulo).abs() <= edge {
        (lo, true)
    } else if (uhi - u).abs() <= edge {
        (hi, true)
    } else {
        (u.exp(), false)
    }
}
