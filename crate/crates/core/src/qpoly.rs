// SPDX-License-Identifier: Apache-2.0

//! Dense polynomials in `q` with non-negative integer coefficients.
//!
//! Every generating function in this crate is a weight enumerator, so the
//! coefficients are counts and never negative. Coefficients are `u64`; all
//! arithmetic is checked and overflow surfaces as [`QPolyError::Overflow`].

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QPolyError {
    #[error("coefficient overflow in {0}")]
    Overflow(&'static str),
    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("multinomial parts sum to {sum}, expected {n}")]
    SumMismatch { n: i64, sum: i64 },
}

pub type Result<T> = std::result::Result<T, QPolyError>;

/// A polynomial `c_0 + c_1 q + c_2 q^2 + ...` stored as its coefficient
/// vector, lowest exponent first. Trailing zeros are always trimmed, so the
/// zero polynomial is the empty vector and derived equality is coefficient-wise.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<u64>", into = "Vec<u64>")]
pub struct QPoly {
    coeffs: Vec<u64>,
}

impl From<Vec<u64>> for QPoly {
    fn from(coeffs: Vec<u64>) -> Self {
        Self::from_coeffs(coeffs)
    }
}

impl From<QPoly> for Vec<u64> {
    fn from(p: QPoly) -> Self {
        p.coeffs
    }
}

impl QPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    /// `c * q^e`.
    pub fn monomial(c: u64, e: usize) -> Self {
        if c == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        Self { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `q^e` (zero past the degree).
    pub fn coeff(&self, e: usize) -> u64 {
        self.coeffs.get(e).copied().unwrap_or(0)
    }

    /// Value at `q = 1`, i.e. the number of objects being counted.
    pub fn eval_at_one(&self) -> Result<u128> {
        self.coeffs.iter().try_fold(0u128, |acc, &c| {
            acc.checked_add(c as u128).ok_or(QPolyError::Overflow("eval_at_one"))
        })
    }

    /// Adds `q^e` in place. This is the inner loop of every brute-force
    /// generating function.
    pub fn add_monomial(&mut self, e: usize) -> Result<()> {
        if self.coeffs.len() <= e {
            self.coeffs.resize(e + 1, 0);
        }
        self.coeffs[e] = self.coeffs[e]
            .checked_add(1)
            .ok_or(QPolyError::Overflow("add_monomial"))?;
        Ok(())
    }

    pub fn checked_add(&self, other: &QPoly) -> Result<QPoly> {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &d) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = c.checked_add(d).ok_or(QPolyError::Overflow("add"))?;
        }
        Ok(QPoly::from_coeffs(coeffs))
    }

    pub fn checked_mul(&self, other: &QPoly) -> Result<QPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(QPoly::zero());
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (a, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in other.coeffs.iter().enumerate() {
                let term = x.checked_mul(y).ok_or(QPolyError::Overflow("mul"))?;
                coeffs[a + b] = coeffs[a + b].checked_add(term).ok_or(QPolyError::Overflow("mul"))?;
            }
        }
        Ok(QPoly::from_coeffs(coeffs))
    }

    /// Multiplies by `q^c`.
    pub fn shift(&self, c: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![0; c];
        coeffs.extend_from_slice(&self.coeffs);
        QPoly { coeffs }
    }

    /// Exact quotient `self / divisor`; fails if any remainder is left.
    pub fn div_exact(&self, divisor: &QPoly) -> Result<QPoly> {
        let lead_exp = divisor.degree().ok_or(QPolyError::DivisionByZero)?;
        if self.is_zero() {
            return Ok(QPoly::zero());
        }
        let lead = divisor.coeffs[lead_exp] as i128;
        let mut rem: Vec<i128> = self.coeffs.iter().map(|&c| c as i128).collect();
        if rem.len() < divisor.coeffs.len() {
            return Err(QPolyError::InexactDivision);
        }
        let qlen = rem.len() - lead_exp;
        let mut quot = vec![0i128; qlen];
        for e in (0..qlen).rev() {
            let top = rem[e + lead_exp];
            if top % lead != 0 {
                return Err(QPolyError::InexactDivision);
            }
            let t = top / lead;
            quot[e] = t;
            if t != 0 {
                for (d, &c) in divisor.coeffs.iter().enumerate() {
                    rem[e + d] = rem[e + d]
                        .checked_sub(t * c as i128)
                        .ok_or(QPolyError::Overflow("div_exact"))?;
                }
            }
        }
        if rem.iter().any(|&r| r != 0) {
            return Err(QPolyError::InexactDivision);
        }
        let coeffs = quot
            .into_iter()
            .map(|c| u64::try_from(c).map_err(|_| QPolyError::InexactDivision))
            .collect::<Result<Vec<u64>>>()?;
        Ok(QPoly::from_coeffs(coeffs))
    }
}

impl Add for &QPoly {
    type Output = QPoly;

    /// Panics on coefficient overflow; use [`QPoly::checked_add`] to handle it.
    fn add(self, rhs: &QPoly) -> QPoly {
        self.checked_add(rhs).expect("QPoly addition overflowed")
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    /// Panics on coefficient overflow; use [`QPoly::checked_mul`] to handle it.
    fn mul(self, rhs: &QPoly) -> QPoly {
        self.checked_mul(rhs).expect("QPoly multiplication overflowed")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("q")?,
                (1, c) => write!(f, "{c}*q")?,
                (e, 1) => write!(f, "q^{e}")?,
                (e, c) => write!(f, "{c}*q^{e}")?,
            }
        }
        Ok(())
    }
}

/// `[n]_q = 1 + q + ... + q^(n-1)`, with `[0]_q = 0`.
pub fn q_int(n: usize) -> QPoly {
    QPoly::from_coeffs(vec![1; n])
}

/// `[n]!_q = [1]_q [2]_q ... [n]_q`, with `[0]!_q = 1`.
pub fn q_factorial(n: usize) -> Result<QPoly> {
    (1..=n).try_fold(QPoly::one(), |acc, j| acc.checked_mul(&q_int(j)))
}

/// Gaussian binomial coefficient, zero outside `0 <= k <= n`.
///
/// Built row by row from `[n, k] = [n-1, k-1] + q^k [n-1, k]`. See
/// [`q_binomial_by_division`] for the factorial-quotient route.
pub fn q_binomial(n: i64, k: i64) -> Result<QPoly> {
    if k < 0 || n < 0 || k > n {
        return Ok(QPoly::zero());
    }
    let (n, k) = (n as usize, k as usize);
    // Only columns 0..=k are needed; row[c] holds [m, c] for the current m.
    let mut row = vec![QPoly::one()];
    for m in 1..=n {
        let width = m.min(k) + 1;
        let mut next = Vec::with_capacity(width);
        for c in 0..width {
            let from_left = if c == 0 { QPoly::zero() } else { row[c - 1].clone() };
            let from_up = row.get(c).map(|p| p.shift(c)).unwrap_or_default();
            next.push(from_left.checked_add(&from_up)?);
        }
        row = next;
    }
    Ok(row.swap_remove(k))
}

/// Gaussian binomial coefficient as the exact quotient `[n]! / ([k]! [n-k]!)`.
pub fn q_binomial_by_division(n: i64, k: i64) -> Result<QPoly> {
    if k < 0 || n < 0 || k > n {
        return Ok(QPoly::zero());
    }
    let (n, k) = (n as usize, k as usize);
    let denom = q_factorial(k)?.checked_mul(&q_factorial(n - k)?)?;
    q_factorial(n)?.div_exact(&denom)
}

/// q-multinomial coefficient `[n]! / ([k_1]! ... [k_s]!)`.
///
/// Zero if any part is negative. If every part is non-negative they must sum
/// to `n`; anything else is a malformed request.
pub fn q_multinomial(n: i64, parts: &[i64]) -> Result<QPoly> {
    if parts.iter().any(|&k| k < 0) {
        return Ok(QPoly::zero());
    }
    let sum: i64 = parts.iter().sum();
    if sum != n {
        return Err(QPolyError::SumMismatch { n, sum });
    }
    let mut denom = QPoly::one();
    for &k in parts {
        denom = denom.checked_mul(&q_factorial(k as usize)?)?;
    }
    q_factorial(n as usize)?.div_exact(&denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[u64]) -> QPoly {
        QPoly::from_coeffs(coeffs.to_vec())
    }

    #[test]
    fn q_int_values() {
        assert!(q_int(0).is_zero());
        assert_eq!(q_int(1), QPoly::one());
        assert_eq!(q_int(3), p(&[1, 1, 1]));
    }

    #[test]
    fn q_factorial_values() {
        assert_eq!(q_factorial(0).unwrap(), QPoly::one());
        assert_eq!(q_factorial(1).unwrap(), QPoly::one());
        // (1+q)(1+q+q^2)
        assert_eq!(q_factorial(3).unwrap(), p(&[1, 2, 2, 1]));
    }

    #[test]
    fn q_binomial_values() {
        assert!(q_binomial(5, -1).unwrap().is_zero());
        assert!(q_binomial(5, 6).unwrap().is_zero());
        assert_eq!(q_binomial(4, 0).unwrap(), QPoly::one());
        assert_eq!(q_binomial(4, 2).unwrap(), p(&[1, 1, 2, 1, 1]));
        assert!(q_binomial(-1, 0).unwrap().is_zero());
    }

    #[test]
    fn recurrence_and_division_agree() {
        for n in 0..=12 {
            for k in -1..=n + 1 {
                assert_eq!(
                    q_binomial(n, k).unwrap(),
                    q_binomial_by_division(n, k).unwrap(),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn q_multinomial_values() {
        assert_eq!(q_multinomial(3, &[1, 1, 1]).unwrap(), p(&[1, 2, 2, 1]));
        assert!(q_multinomial(4, &[2, -1, 3]).unwrap().is_zero());
        assert_eq!(q_multinomial(5, &[5]).unwrap(), QPoly::one());
        assert_eq!(q_multinomial(0, &[]).unwrap(), QPoly::one());
        assert_eq!(q_multinomial(4, &[1, 1]), Err(QPolyError::SumMismatch { n: 4, sum: 2 }));
    }

    #[test]
    fn ring_operations() {
        assert_eq!(&p(&[1, 1]) + &p(&[0, 1]), p(&[1, 2]));
        assert_eq!(p(&[1, 1]).shift(2), p(&[0, 0, 1, 1]));
        assert_eq!(&q_int(2) * &q_int(3), q_factorial(3).unwrap());
        assert!(QPoly::zero().shift(3).is_zero());
        assert!((&QPoly::zero() * &q_int(3)).is_zero());
    }

    #[test]
    fn overflow_is_reported() {
        let big = QPoly::monomial(u64::MAX, 0);
        assert_eq!(big.checked_add(&QPoly::one()), Err(QPolyError::Overflow("add")));
        assert_eq!(big.checked_mul(&p(&[2])), Err(QPolyError::Overflow("mul")));
        let mut m = big.clone();
        assert!(m.add_monomial(0).is_err());
    }

    #[test]
    fn inexact_division_is_reported() {
        assert_eq!(q_int(3).div_exact(&q_int(2)), Err(QPolyError::InexactDivision));
        assert_eq!(q_int(3).div_exact(&QPoly::zero()), Err(QPolyError::DivisionByZero));
        assert_eq!(q_factorial(3).unwrap().div_exact(&q_int(3)).unwrap(), q_int(2));
    }

    #[test]
    fn trimming_and_zero() {
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[1, 0, 0]).coeffs(), &[1]);
        assert_eq!(QPoly::monomial(0, 4), QPoly::zero());
        assert_eq!(QPoly::zero().degree(), None);
    }

    #[test]
    fn text_rendering() {
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(p(&[1, 0, 2, 1]).to_string(), "1 + 2*q^2 + q^3");
        assert_eq!(p(&[0, 1]).to_string(), "q");
        assert_eq!(p(&[3, 2]).to_string(), "3 + 2*q");
    }

    #[test]
    fn json_rendering() {
        let poly = p(&[1, 0, 2]);
        let text = serde_json::to_string(&poly).unwrap();
        assert_eq!(text, "[1,0,2]");
        let back: QPoly = serde_json::from_str("[1,0,2,0]").unwrap();
        assert_eq!(back, poly);
    }
}
