use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{json, QPoly};
use crate::error::{Error, Result};

/// A finite integer sequence `(a_origin, a_origin+1, ...)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntSequence {
    pub origin: i64,
    #[serde(with = "json::big_vec")]
    pub values: Vec<BigInt>,
}

impl IntSequence {
    pub fn new(origin: i64, values: Vec<BigInt>) -> Self {
        IntSequence { origin, values }
    }

    pub fn from_i64s(origin: i64, values: &[i64]) -> Self {
        IntSequence::new(origin, values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last index, or `origin - 1` when empty.
    pub fn end(&self) -> i64 {
        self.origin + self.values.len() as i64 - 1
    }

    /// `a_k`, zero outside the stored range.
    pub fn get(&self, k: i64) -> BigInt {
        usize::try_from(k - self.origin)
            .ok()
            .and_then(|i| self.values.get(i))
            .cloned()
            .unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.origin + i as i64, v))
    }

    /// First and last index with a nonzero entry.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.iter().find(|(_, v)| !v.is_zero())?.0;
        let last = self.iter().filter(|(_, v)| !v.is_zero()).last()?.0;
        Some((first, last))
    }

    /// `a_i^2 >= a_{i-1} a_{i+1}` at every interior index.
    ///
    /// This is the weak inequality; sequences such as `(1, 1, 1)` satisfy it
    /// with equality.
    pub fn is_log_concave(&self) -> bool {
        self.values
            .windows(3)
            .all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
    }

    /// The nonzero entries occupy a contiguous run of indices.
    pub fn has_no_internal_zeros(&self) -> bool {
        match self.support() {
            None => true,
            Some((lo, hi)) => (lo..=hi).all(|k| !self.get(k).is_zero()),
        }
    }

    /// Every 2x2 minor of the Toeplitz matrix `[a_{j-i}]` is nonnegative,
    /// checked as `a_j a_{i+k} - a_i a_{j+k} >= 0` for `i < j`, `k >= 0`.
    pub fn is_pf2(&self) -> Result<bool> {
        if let Some((k, _)) = self.iter().find(|(_, v)| v.is_negative()) {
            return Err(Error::NegativeEntry(k));
        }
        let len = self.values.len() as i64;
        let a = |x: i64| -> BigInt {
            if (0..len).contains(&x) {
                self.values[x as usize].clone()
            } else {
                BigInt::zero()
            }
        };
        for i in 0..len {
            for j in i + 1..len {
                for k in 0..len {
                    if a(j) * a(i + k) < a(i) * a(j + k) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// A coefficient of `f_i f_j - f_{i-1} f_{j+1}` that came out negative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QLogConcavityViolation {
    pub i: usize,
    pub j: usize,
    pub exponent: usize,
    #[serde(with = "json::big")]
    pub coefficient: BigInt,
}

/// First `(i, j)` with `i <= j` where `f_i f_j - f_{i-1} f_{j+1}` has a
/// negative coefficient; entries outside the list count as zero.
pub fn strong_q_log_concavity_violation(fs: &[QPoly]) -> Option<QLogConcavityViolation> {
    let zero = QPoly::zero();
    let at = |idx: Option<usize>| idx.and_then(|x| fs.get(x)).unwrap_or(&zero);
    for i in 0..fs.len() {
        for j in i..fs.len() {
            let diff = &(&fs[i] * &fs[j]) - &(at(i.checked_sub(1)) * at(Some(j + 1)));
            if let Some((exponent, coefficient)) = diff.first_negative() {
                return Some(QLogConcavityViolation {
                    i,
                    j,
                    exponent,
                    coefficient,
                });
            }
        }
    }
    None
}

/// Coefficientwise nonnegativity of `f_i f_j - f_{i-1} f_{j+1}` for all `i <= j`.
pub fn q_seq_strongly_log_concave(fs: &[QPoly]) -> bool {
    strong_q_log_concavity_violation(fs).is_none()
}
