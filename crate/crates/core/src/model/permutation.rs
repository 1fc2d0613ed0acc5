use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `[n]` in one-line notation, values `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    word: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(word: Vec<usize>) -> Result<Self> {
        Permutation::new(word)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.word
    }
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} outside [1, {n}]"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
        }
        Ok(Permutation { word })
    }

    pub(crate) fn from_word_unchecked(word: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(word.clone()).is_ok());
        Permutation { word }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// `pi_i` for `1 <= i <= n`.
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1]
    }

    /// Number of ordinary inversions, the Coxeter length.
    pub fn length(&self) -> usize {
        word_length(&self.word)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.word.len()];
        for (pos, &v) in self.word.iter().enumerate() {
            inv[v - 1] = pos + 1;
        }
        Permutation { word: inv }
    }

    /// The permutation of `[k]` in the same relative order as `pi_1 .. pi_k`.
    pub fn flatten(&self, k: usize) -> Permutation {
        assert!(k <= self.len(), "cannot flatten to {k} > {}", self.len());
        Permutation {
            word: standardize(&self.word[..k]),
        }
    }
}

pub(crate) fn word_length(word: &[usize]) -> usize {
    let mut count = 0;
    for (i, &a) in word.iter().enumerate() {
        count += word[i + 1..].iter().filter(|&&b| b < a).count();
    }
    count
}

/// Relabel distinct values by rank, smallest becoming 1.
pub(crate) fn standardize(values: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&i| values[i]);
    let mut out = vec![0; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank + 1;
    }
    out
}

/// Step `word` to its lexicographic successor in place; false at the last one.
pub(crate) fn next_permutation(word: &mut [usize]) -> bool {
    let n = word.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && word[i - 1] >= word[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while word[j] <= word[i - 1] {
        j -= 1;
    }
    word.swap(i - 1, j);
    word[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.word.len() < 10;
        for (idx, v) in self.word.iter().enumerate() {
            if !compact && idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Parses either digit strings such as `45231` or whitespace/comma separated
/// values.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let word: std::result::Result<Vec<usize>, String> =
            if s.contains(|c: char| c == ',' || c.is_whitespace()) {
                s.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse().map_err(|_| format!("bad value {t:?}")))
                    .collect()
            } else {
                s.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| format!("bad digit {c:?}"))
                    })
                    .collect()
            };
        Permutation::new(word.map_err(Error::InvalidPermutation)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(Permutation::identity(6).length(), 0);
        assert_eq!(p("45231").length(), 8);
        assert_eq!(p("34215").length(), 5);
    }

    #[test]
    fn flattening() {
        assert_eq!(p("641235").flatten(4), p("4312"));
        assert_eq!(p("641235").flatten(3), p("321"));
        assert_eq!(p("641235").flatten(6), p("641235"));
    }

    #[test]
    fn inverse_round_trip() {
        let pi = p("34215");
        assert_eq!(pi.inverse(), p("43125"));
        assert_eq!(pi.inverse().inverse(), pi);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        assert!("12a".parse::<Permutation>().is_err());
    }

    #[test]
    fn parses_separated_words() {
        assert_eq!(p("10 1 2 3 4 5 6 7 8 9").at(1), 10);
        assert_eq!(p("2,1"), p("21"));
    }

    #[test]
    fn lexicographic_successor_visits_all() {
        let mut w = vec![1, 2, 3, 4];
        let mut seen = vec![w.clone()];
        while next_permutation(&mut w) {
            assert!(seen.last().unwrap() < &w);
            seen.push(w.clone());
        }
        assert_eq!(seen.len(), 24);
    }
}
