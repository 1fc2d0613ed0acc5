use std::fmt;

use serde::{Deserialize, Serialize};

use super::{HSequence, Permutation};
use crate::error::{Error, Result};

/// A finite set of index pairs `(i, j)` with `1 <= i < j`, kept sorted
/// lexicographically and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct PairSet {
    pairs: Vec<(usize, usize)>,
}

impl TryFrom<Vec<(usize, usize)>> for PairSet {
    type Error = Error;

    fn try_from(pairs: Vec<(usize, usize)>) -> Result<Self> {
        PairSet::new(pairs)
    }
}

impl From<PairSet> for Vec<(usize, usize)> {
    fn from(s: PairSet) -> Self {
        s.pairs
    }
}

impl FromIterator<(usize, usize)> for PairSet {
    /// Panics on a pair that is not of the form `1 <= i < j`.
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        PairSet::new(iter.into_iter().collect()).expect("pairs must satisfy 1 <= i < j")
    }
}

impl PairSet {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i == 0 || i >= j) {
            return Err(Error::InvalidPairSet(format!(
                "pair ({i},{j}) must satisfy 1 <= i < j"
            )));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(PairSet { pairs })
    }

    pub(crate) fn from_sorted_unchecked(pairs: Vec<(usize, usize)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        PairSet { pairs }
    }

    pub fn empty() -> Self {
        PairSet::default()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.binary_search(&(i, j)).is_ok()
    }

    pub fn is_subset(&self, other: &PairSet) -> bool {
        self.iter().all(|(i, j)| other.contains(i, j))
    }

    /// Pairs of `self` not in `other`.
    pub fn difference(&self, other: &PairSet) -> PairSet {
        PairSet::from_sorted_unchecked(
            self.iter()
                .filter(|&(i, j)| !other.contains(i, j))
                .collect(),
        )
    }

    /// Largest second index, `None` for the empty set.
    pub fn j_of(&self) -> Option<usize> {
        self.pairs.iter().map(|&(_, j)| j).max()
    }

    /// Largest descent position `i` with `(i, i+1)` in the set.
    pub fn m_of(&self) -> Result<usize> {
        self.pairs
            .iter()
            .filter(|&&(i, j)| j == i + 1)
            .map(|&(i, _)| i)
            .max()
            .ok_or_else(|| Error::NoDescent(self.clone()))
    }
}

impl fmt::Display for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, (i, j)) in self.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "}}")
    }
}

/// Pairs `(i, j)` with `i < j <= min(n, h(i))`.
pub fn possible_pairs(h: &HSequence, n: usize) -> PairSet {
    let mut pairs = Vec::new();
    for i in 1..n {
        for j in i + 1..=h.at(i).min(n) {
            pairs.push((i, j));
        }
    }
    PairSet::from_sorted_unchecked(pairs)
}

pub fn in_possible_pairs(h: &HSequence, i: usize, j: usize) -> bool {
    i >= 1 && i < j && j <= h.at(i)
}

/// The h-inversions of `pi`: inversions `(i, j)` with `j <= h(i)`.
pub fn inv_h(h: &HSequence, pi: &Permutation) -> PairSet {
    let w = pi.word();
    let n = w.len();
    let mut pairs = Vec::new();
    for i in 1..n {
        for j in i + 1..=h.at(i).min(n) {
            if w[i - 1] > w[j - 1] {
                pairs.push((i, j));
            }
        }
    }
    PairSet::from_sorted_unchecked(pairs)
}

/// True when `(i,j), (j,k)` in `pairs` and `(i,k)` a possible pair within
/// `window` always force `(i,k)` into `pairs`.
pub fn is_h_closed(h: &HSequence, pairs: &PairSet, window: usize) -> bool {
    for (i, j) in pairs.iter() {
        let start = pairs.pairs.partition_point(|&(a, _)| a < j);
        for &(_, k) in pairs.pairs[start..].iter().take_while(|&&(a, _)| a == j) {
            if k <= window && k <= h.at(i) && !pairs.contains(i, k) {
                return false;
            }
        }
    }
    true
}

/// Closure test on `s` and on its complement in the possible pairs of
/// `[window]`. Returns false when some pair of `s` lies outside that window
/// or outside the possible pairs.
pub fn is_admissible_in_window(h: &HSequence, s: &PairSet, window: usize) -> bool {
    if s.iter()
        .any(|(i, j)| !in_possible_pairs(h, i, j) || j > window)
    {
        return false;
    }
    let complement = possible_pairs(h, window).difference(s);
    is_h_closed(h, s, window) && is_h_closed(h, &complement, window)
}

/// Admissibility via closure of the set and of its complement.
///
/// The complement is taken inside `[j(S)]`. A larger window gives the same
/// answer: any composite `(i, k)` with `k > j(S)` is outside `S`, hence in
/// the complement.
pub fn is_admissible(h: &HSequence, s: &PairSet) -> bool {
    match s.j_of() {
        None => true,
        Some(window) => is_admissible_in_window(h, s, window),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[(usize, usize)]) -> PairSet {
        v.iter().copied().collect()
    }

    #[test]
    fn possible_pair_windows() {
        assert_eq!(
            possible_pairs(&HSequence::tail(1), 3),
            ps(&[(1, 2), (2, 3)])
        );
        assert_eq!(
            possible_pairs(&HSequence::tail(2), 4),
            ps(&[(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
        );
        let h = HSequence::new(vec![2, 4, 4, 5], 1).unwrap();
        assert_eq!(possible_pairs(&h, 4), ps(&[(1, 2), (2, 3), (2, 4), (3, 4)]));
    }

    #[test]
    fn h_inversions_of_45231() {
        let pi: Permutation = "45231".parse().unwrap();
        assert_eq!(
            inv_h(&HSequence::tail(2), &pi),
            ps(&[(1, 3), (2, 3), (2, 4), (3, 5), (4, 5)])
        );
        assert_eq!(inv_h(&HSequence::tail(1), &pi), ps(&[(2, 3), (4, 5)]));
        assert!(inv_h(&HSequence::tail(2), &Permutation::identity(5)).is_empty());
    }

    #[test]
    fn closure() {
        assert!(is_h_closed(&HSequence::tail(2), &PairSet::empty(), 3));
        assert!(!is_h_closed(&HSequence::tail(2), &ps(&[(1, 2), (2, 3)]), 3));
        assert!(is_h_closed(&HSequence::tail(1), &ps(&[(1, 2), (2, 3)]), 3));
    }

    #[test]
    fn admissibility() {
        let t2 = HSequence::tail(2);
        assert!(is_admissible(
            &t2,
            &ps(&[(1, 3), (2, 3), (2, 4), (3, 5), (4, 5)])
        ));
        assert!(!is_admissible(&HSequence::tail(1), &ps(&[(1, 3)])));
        assert!(!is_admissible(&t2, &ps(&[(1, 3)])));
        assert!(is_admissible(&t2, &PairSet::empty()));
    }

    #[test]
    fn j_and_m() {
        let s = ps(&[(3, 4), (3, 5), (3, 6), (4, 6), (5, 6)]);
        assert_eq!((s.j_of(), s.m_of().unwrap()), (Some(6), 5));
        let s = ps(&[(1, 3), (2, 3), (2, 4)]);
        assert_eq!((s.j_of(), s.m_of().unwrap()), (Some(4), 2));
        let s = ps(&[(1, 2)]);
        assert_eq!((s.j_of(), s.m_of().unwrap()), (Some(2), 1));
        assert!(matches!(ps(&[(1, 3)]).m_of(), Err(Error::NoDescent(_))));
        assert_eq!(PairSet::empty().j_of(), None);
    }

    #[test]
    fn rejects_malformed_pairs() {
        assert!(PairSet::new(vec![(2, 2)]).is_err());
        assert!(PairSet::new(vec![(0, 1)]).is_err());
        assert_eq!(PairSet::new(vec![(2, 3), (1, 2), (2, 3)]).unwrap().len(), 2);
        assert_eq!(
            serde_json::to_string(&ps(&[(2, 3), (1, 3)])).unwrap(),
            "[[1,3],[2,3]]"
        );
    }
}
