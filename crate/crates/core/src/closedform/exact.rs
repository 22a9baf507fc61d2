//! Rational ground truth for `(1 − z)^a` with integer `a`.
//!
//! Both routes stay in `BigRational`: the closed-form product and a direct
//! elimination of the integer Hardy-space normal equations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Signed coefficients of `(1 − z)^a`.
pub fn one_minus_z_coeffs(a: u32) -> Vec<BigInt> {
    (0..=a as u64)
        .map(|m| {
            let c = binomial(a as u64, m);
            if m % 2 == 1 { -c } else { c }
        })
        .collect()
}

/// `c_{k,n}` as an exact rational.
pub fn coeff_rational(a: u32, k: usize, n: usize) -> Result<BigRational> {
    if a < 1 || k > n {
        return Err(Error::InvalidArgument(format!("need a ≥ 1 and k ≤ n, got a={a} k={k} n={n}")));
    }
    let (a, k, n) = (a as u64, k as u64, n as u64);
    let mut num = binomial(k + a - 1, k);
    let mut den = BigInt::one();
    for s in 0..a {
        num *= BigInt::from(n - k + 1 + s);
        den *= BigInt::from(n + a + 1 + s);
    }
    Ok(BigRational::new(num, den))
}

pub fn coeffs_rational(a: u32, n: usize) -> Result<Vec<BigRational>> {
    (0..=n).map(|k| coeff_rational(a, k, n)).collect()
}

/// Hardy-space Gram matrix of `(1 − z)^a` at degree `n`, as integers.
pub fn gram_matrix(a: u32, n: usize) -> Vec<Vec<BigInt>> {
    let f = one_minus_z_coeffs(a);
    let lag = |d: usize| -> BigInt {
        f.iter().zip(f.iter().skip(d)).map(|(x, y)| x * y).sum()
    };
    (0..=n)
        .map(|j| (0..=n).map(|k| lag(j.abs_diff(k))).collect())
        .collect()
}

/// Solves the degree-`n` normal equations exactly by banded elimination.
pub fn solve_normal_equations(a: u32, n: usize) -> Result<Vec<BigRational>> {
    if a < 1 {
        return Err(Error::InvalidArgument("the exponent a must be at least 1".into()));
    }
    let dim = n + 1;
    let band = a as usize;
    let mut m: Vec<Vec<BigRational>> = gram_matrix(a, n)
        .into_iter()
        .map(|row| row.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut rhs: Vec<BigRational> = (0..dim).map(|j| if j == 0 { int(1) } else { int(0) }).collect();

    for p in 0..dim {
        if m[p][p].is_zero() {
            return Err(Error::NotPositiveDefinite { index: p, value: 0.0 });
        }
        let last = (p + band).min(dim - 1);
        for r in p + 1..=last {
            if m[r][p].is_zero() {
                continue;
            }
            let factor = &m[r][p] / &m[p][p];
            let (top, bottom) = m.split_at_mut(r);
            for (entry, pivot) in bottom[0][p..=last].iter_mut().zip(&top[p][p..=last]) {
                *entry -= &factor * pivot;
            }
            let delta = &factor * &rhs[p];
            rhs[r] -= delta;
        }
    }
    let mut x = vec![BigRational::zero(); dim];
    for p in (0..dim).rev() {
        let last = (p + band).min(dim - 1);
        let mut acc = rhs[p].clone();
        for c in p + 1..=last {
            acc -= &m[p][c] * &x[c];
        }
        x[p] = acc / &m[p][p];
    }
    Ok(x)
}

pub fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_small_cases() {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(coeffs_rational(1, 2).unwrap(), vec![r(3, 4), r(1, 2), r(1, 4)]);
        assert_eq!(coeffs_rational(2, 2).unwrap(), vec![r(2, 5), r(2, 5), r(1, 5)]);
    }

    #[test]
    fn elimination_reproduces_closed_form() {
        for a in 1..=20 {
            for n in [0, 1, 2, 7, 19, 40] {
                let solved = solve_normal_equations(a, n).unwrap();
                assert_eq!(solved, coeffs_rational(a, n).unwrap(), "a={a} n={n}");
            }
        }
    }

    #[test]
    fn gram_is_banded_toeplitz() {
        let g = gram_matrix(2, 4);
        assert_eq!(g[0][0], BigInt::from(6));
        assert_eq!(g[0][1], BigInt::from(-4));
        assert_eq!(g[0][2], BigInt::from(1));
        assert_eq!(g[0][3], BigInt::from(0));
        assert_eq!(g[3][1], g[2][0]);
    }
}
