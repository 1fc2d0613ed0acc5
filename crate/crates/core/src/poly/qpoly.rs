use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::json;

/// A dense polynomial in `q` with exact integer coefficients, index = power.
/// Trailing zeros are trimmed; the zero polynomial has no coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "RawQPoly")]
pub struct QPoly {
    #[serde(with = "json::big_vec")]
    coeffs: Vec<BigInt>,
}

#[derive(Deserialize)]
struct RawQPoly {
    #[serde(with = "json::big_vec")]
    coeffs: Vec<BigInt>,
}

impl From<RawQPoly> for QPoly {
    fn from(raw: RawQPoly) -> Self {
        QPoly::new(raw.coeffs)
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        QPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        QPoly::monomial(BigInt::one(), 0)
    }

    /// `c * q^e`.
    pub fn monomial(c: BigInt, e: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c;
        QPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^e`, zero past the end.
    pub fn coeff(&self, e: usize) -> BigInt {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Add `c` to the coefficient of `q^e`.
    pub fn add_term(&mut self, e: usize, c: &BigInt) {
        if self.coeffs.len() <= e {
            self.coeffs.resize(e + 1, BigInt::zero());
        }
        self.coeffs[e] += c;
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Multiply by `q^e`.
    pub fn shift(&self, e: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Lowest exponent with a negative coefficient.
    pub fn first_negative(&self) -> Option<(usize, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| c.is_negative())
            .map(|(e, c)| (e, c.clone()))
    }

    /// Exact quotient by `divisor`, or `None` when the division leaves a
    /// remainder or is not integral.
    pub fn div_exact(&self, divisor: &QPoly) -> Option<QPoly> {
        let dd = divisor.degree()?;
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return rem.iter().all(Zero::is_zero).then(QPoly::zero);
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for e in (0..quot.len()).rev() {
            let top = &rem[e + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[e + i] -= &q * c;
            }
            quot[e] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| QPoly::new(quot))
    }
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl Sub for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); len];
        for (e, c) in self.coeffs.iter().enumerate() {
            coeffs[e] += c;
        }
        for (e, c) in rhs.coeffs.iter().enumerate() {
            coeffs[e] -= c;
        }
        QPoly::new(coeffs)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::new(coeffs)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            if e == 0 || !a.is_one() {
                write!(f, "{a}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Gaussian binomial `[n choose k]_q`, zero for `k < 0` or `k > n`.
///
/// Built row by row from `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
pub fn q_binom(n: usize, k: i64) -> QPoly {
    if k < 0 || k as usize > n {
        return QPoly::zero();
    }
    let k = k as usize;
    let mut row = vec![QPoly::one()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m + 1);
        for j in 0..=m.min(k) {
            let left = if j > 0 {
                row[j - 1].clone()
            } else {
                QPoly::zero()
            };
            let right = row.get(j).map(|p| p.shift(j)).unwrap_or_default();
            next.push(&left + &right);
        }
        row = next;
    }
    row.swap_remove(k)
}

/// `[n]_q! = (1)(1+q)...(1+q+...+q^{n-1})`.
pub fn q_factorial(n: usize) -> QPoly {
    (1..=n).fold(QPoly::one(), |acc, m| {
        &acc * &QPoly::new(vec![BigInt::one(); m])
    })
}

/// Gaussian binomial through `[n]_q! / ([k]_q! [n-k]_q!)`.
pub fn q_binom_by_factorials(n: usize, k: usize) -> QPoly {
    if k > n {
        return QPoly::zero();
    }
    let den = &q_factorial(k) * &q_factorial(n - k);
    q_factorial(n)
        .div_exact(&den)
        .expect("q-factorials divide exactly")
}

/// `#{(a, b) : a > b, a in A, b in [lo, hi] \ A}` for `A` inside `[lo, hi]`.
pub fn subset_length(subset: &[usize], lo: usize, hi: usize) -> usize {
    debug_assert!(subset.iter().all(|&a| lo <= a && a <= hi));
    let mut count = 0;
    for &a in subset {
        count += (lo..a).filter(|b| !subset.contains(b)).count();
    }
    count
}

/// Gaussian binomial `[hi-lo+1 choose r]_q` as the length generating function
/// of the `r`-subsets of `[lo, hi]`.
pub fn q_binom_by_subsets(lo: usize, hi: usize, r: usize) -> QPoly {
    let width = (hi + 1).saturating_sub(lo);
    assert!(width < 32, "window too wide for subset enumeration");
    let one = BigInt::one();
    let mut out = QPoly::zero();
    for mask in 0u32..(1 << width) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let subset: Vec<usize> = (0..width)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| lo + b)
            .collect();
        out.add_term(subset_length(&subset, lo, hi), &one);
    }
    out
}
