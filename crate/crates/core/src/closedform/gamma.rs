//! `ln Γ` and `ln B` for positive arguments.

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine terms
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Below this `Γ` itself is representable and is built by recurrence.
const STIRLING_FROM: f64 = 171.5;

/// ½ ln(2π)
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::InvalidArgument(format!("log_gamma needs a positive finite argument, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x >= STIRLING_FROM {
        return stirling(x);
    }
    gamma_by_recurrence(x).ln()
}

/// `Γ(x)` for `0.5 ≤ x < 171`: Lanczos on `[1, 2)` and upward recurrence.
fn gamma_by_recurrence(x: f64) -> f64 {
    if x < 1.0 {
        return gamma_by_recurrence(x + 1.0) / x;
    }
    let shift = x.floor() - 1.0;
    let y = x - shift;
    let mut acc = lanczos_gamma(y);
    for i in 0..shift as usize {
        acc *= y + i as f64;
    }
    acc
}

/// Lanczos approximation of `Γ(y)` for `y ∈ [1, 2)`.
fn lanczos_gamma(y: f64) -> f64 {
    if y == 1.0 {
        return 1.0;
    }
    let z = y - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * sum
}

fn stirling(x: f64) -> f64 {
    // Bernoulli terms B_{2k} / (2k (2k−1) x^{2k−1}), k = 1..=7
    const TERMS: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / x;
    let inv_sq = inv * inv;
    let mut series = 0.0;
    for c in TERMS.iter().rev() {
        series = series * inv_sq + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series * inv
}

/// `ln B(x, y) = ln Γ(x) + ln Γ(y) − ln Γ(x+y)`.
pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    Ok(log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use num_bigint::BigUint;
    use num_traits::{One, ToPrimitive};

    #[test]
    fn small_examples() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-15);
        assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn factorials_up_to_170() {
        let mut fact = BigUint::one();
        for n in 1u32..=170 {
            fact *= n;
            let exact = fact.to_f64().unwrap();
            let got = log_gamma(n as f64 + 1.0).unwrap().exp();
            assert!(((got - exact) / exact).abs() <= 1e-13, "n = {n}: {got:e} vs {exact:e}");
        }
    }

    #[test]
    fn half_integer_by_recurrence() {
        // Γ(100.5) = Γ(1/2) Π_{k=0}^{99} (k + 1/2)
        let brute = (0..100).fold(PI.sqrt(), |acc, k| acc * (k as f64 + 0.5));
        let got = log_gamma(100.5).unwrap().exp();
        assert!(((got - brute) / brute).abs() < 1e-11);
    }

    #[test]
    fn branches_agree_at_the_switch() {
        for x in [150.5, 165.0, 170.0, 171.4] {
            let direct = gamma_by_recurrence(x).ln();
            assert!((direct - stirling(x)).abs() < 1e-15 * direct.abs(), "{x}");
        }
    }

    #[test]
    fn lanczos_matches_known_values() {
        // Γ(3/2) = √π / 2
        assert!((lanczos_gamma(1.5) - PI.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn recurrence_holds_for_large_arguments() {
        for x in [50.25, 1e3 + 0.7, 1e5, 1e6] {
            let lhs = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap();
            assert!((lhs - f64::ln(x)).abs() <= 4.0 * f64::EPSILON * log_gamma(x).unwrap(), "{x}");
        }
    }

    fn reflection_check(x: f64) -> f64 {
        // Γ(x)Γ(1−x) = π / sin(πx)
        ln_gamma_unchecked(x) + ln_gamma_unchecked(1.0 - x) - (PI / (PI * x).sin()).ln()
    }

    #[test]
    fn reflection_formula() {
        for x in [0.1, 0.25, 0.3, 0.45] {
            assert!(reflection_check(x).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn beta_small_integers() {
        // B(5,2) = 1/30, B(3,2) = 1/12
        assert!((ln_beta(5.0, 2.0).unwrap().exp() - 1.0 / 30.0).abs() < 1e-17);
        assert!((ln_beta(3.0, 2.0).unwrap().exp() - 1.0 / 12.0).abs() < 1e-17);
    }
}
