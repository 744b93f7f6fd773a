//! Log-gamma and digamma via argument shifting plus asymptotic series.

use crate::numstat::NumError;
use crate::scalar::Scalar;

/// Stirling series coefficients `B_2k / (2k (2k - 1))`, k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Asymptotic digamma coefficients `B_2k / (2k)`, k = 1..7.
const DIGAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

const LN_GAMMA_SHIFT: f64 = 15.0;
const DIGAMMA_SHIFT: f64 = 10.0;

fn stirling<T: Scalar>(z: T) -> T {
    let half = T::lit(0.5);
    let ln_sqrt_2pi = T::lit(0.918_938_533_204_672_8);
    let inv = z.recip();
    let inv2 = inv * inv;
    // Horner over 1/z^2, innermost term first.
    let mut series = T::zero();
    for &c in STIRLING.iter().rev() {
        series = series * inv2 + T::lit(c);
    }
    (z - half) * z.ln() - z + ln_sqrt_2pi + series * inv
}

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Arguments below 15 are shifted upward with the recurrence
/// `Γ(x + 1) = x Γ(x)` and the Stirling series is evaluated at the
/// shifted point.
pub fn ln_gamma<T: Scalar>(x: T) -> Result<T, NumError> {
    if !x.is_finite() || x <= T::zero() {
        return Err(NumError::domain("ln_gamma", x, "finite x > 0"));
    }
    let threshold = T::lit(LN_GAMMA_SHIFT);
    if x >= threshold {
        return Ok(stirling(x));
    }
    let mut z = x;
    let mut product = T::one();
    while z < threshold {
        product *= z;
        z += T::one();
    }
    Ok(stirling(z) - product.ln())
}

/// `ln Γ(a + n) - ln Γ(a)`, the log of the rising factorial `a (a+1) ... (a+n-1)`.
///
/// Small `n` is summed term by term, which stays accurate when `a` is
/// large and the two gamma values would nearly cancel.
pub fn ln_rising<T: Scalar>(a: T, n: u64) -> Result<T, NumError> {
    if !a.is_finite() || a <= T::zero() {
        return Err(NumError::domain("ln_rising", a, "finite a > 0"));
    }
    if n == 0 {
        return Ok(T::zero());
    }
    if n <= 64 {
        let mut acc = T::zero();
        let mut chunk = T::one();
        for m in 0..n {
            chunk *= a + T::from_count(m);
            if m % 8 == 7 {
                acc += chunk.ln();
                chunk = T::one();
            }
        }
        return Ok(acc + chunk.ln());
    }
    Ok(ln_gamma(a + T::from_count(n))? - ln_gamma(a)?)
}

/// Digamma function `ψ(x) = d/dx ln Γ(x)` for `x > 0`.
pub fn digamma<T: Scalar>(x: T) -> Result<T, NumError> {
    if !x.is_finite() || x <= T::zero() {
        return Err(NumError::domain("digamma", x, "finite x > 0"));
    }
    let threshold = T::lit(DIGAMMA_SHIFT);
    let mut z = x;
    let mut shift = T::zero();
    while z < threshold {
        shift += z.recip();
        z += T::one();
    }
    let inv = z.recip();
    let inv2 = inv * inv;
    let mut series = T::zero();
    for &c in DIGAMMA_ASYMP.iter().rev() {
        series = series * inv2 + T::lit(c);
    }
    Ok(z.ln() - T::lit(0.5) * inv - series * inv2 - shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0_f64).unwrap().abs() < 1e-14);
        assert!(ln_gamma(2.0_f64).unwrap().abs() < 1e-14);
        assert!((ln_gamma(5.0_f64).unwrap() - 24.0_f64.ln()).abs() < 1e-13);
        let half = 0.5 * std::f64::consts::PI.ln();
        assert!((ln_gamma(0.5_f64).unwrap() - half).abs() < 1e-13);
    }

    #[test]
    fn ln_gamma_rejects_non_positive() {
        assert!(ln_gamma(0.0_f64).is_err());
        assert!(ln_gamma(-1.5_f64).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
        assert!(ln_gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn ln_gamma_tiny_argument() {
        // ln Γ(x) ≈ -ln x - γ x for x → 0
        let x = 1e-6_f64;
        let approx = -x.ln() - EULER * x;
        assert!((ln_gamma(x).unwrap() - approx).abs() < 1e-11);
    }

    #[test]
    fn digamma_known_values() {
        assert!((digamma(1.0_f64).unwrap() + EULER).abs() < 1e-12);
        assert!((digamma(2.0_f64).unwrap() - (1.0 - EULER)).abs() < 1e-12);
        let expect = -EULER - 2.0 * 2.0_f64.ln();
        assert!((digamma(0.5_f64).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn digamma_domain() {
        assert!(digamma(0.0_f64).is_err());
        assert!(digamma(-3.0_f64).is_err());
    }

    #[test]
    fn ln_rising_matches_gamma_difference() {
        for &a in &[1e-3_f64, 0.5, 1.0, 7.25, 1e4] {
            for &n in &[0_u64, 1, 5, 63, 64, 65, 500] {
                let direct = ln_gamma(a + n as f64).unwrap() - ln_gamma(a).unwrap();
                let got = ln_rising(a, n).unwrap();
                assert!(
                    (got - direct).abs() <= 1e-9 * direct.abs().max(1.0),
                    "a={a} n={n}: {got} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn single_precision_is_supported() {
        assert!((ln_gamma(5.0_f32).unwrap() - 24.0_f32.ln()).abs() < 1e-5);
        assert!((digamma(1.0_f32).unwrap() + EULER as f32).abs() < 1e-5);
    }
}
