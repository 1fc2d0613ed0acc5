//! Enumeration of permutations by h-inversion set.
//!
//! Two independent routes are provided. The brute-force oracle scans all of
//! `S_n` in lexicographic order (split by first letter across rayon workers)
//! and is capped by [`Limits::max_n`]. The structured enumerator
//! [`restricted_ih`] only chooses the first `m(S)` entries, since every
//! permutation with a nonempty h-inversion set `S` is increasing after its
//! last descent `m(S)`; it is what the expansions use for sizes like
//! `m + h(m) - 1` that are out of reach for a full scan.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    next_permutation, possible_pairs, word_length, HSequence, PairSet, Permutation,
};
use crate::poly::QPoly;

pub const DEFAULT_MAX_N: usize = 10;
pub const MAX_N_ENV: &str = "INVPOLY_MAX_N";

/// Cap on the size of brute-force scans over `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_n: DEFAULT_MAX_N,
        }
    }
}

impl Limits {
    pub fn new(max_n: usize) -> Self {
        Limits { max_n }
    }

    /// Defaults, with `INVPOLY_MAX_N` taking precedence when set and numeric.
    pub fn from_env() -> Self {
        let max_n = std::env::var(MAX_N_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_N);
        Limits { max_n }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            Err(Error::BoundExceeded { n, max: self.max_n })
        } else {
            Ok(())
        }
    }
}

/// Indexes the possible pairs of `[n]` so h-inversion sets fit in a bitmask.
struct PairIndex {
    pairs: Vec<(usize, usize)>,
}

impl PairIndex {
    fn new(h: &HSequence, n: usize) -> Self {
        let pairs = possible_pairs(h, n).pairs().to_vec();
        assert!(pairs.len() <= 128, "too many possible pairs for a bitmask");
        PairIndex { pairs }
    }

    fn mask(&self, word: &[usize]) -> u128 {
        let mut mask = 0u128;
        for (bit, &(i, j)) in self.pairs.iter().enumerate() {
            if word[i - 1] > word[j - 1] {
                mask |= 1 << bit;
            }
        }
        mask
    }

    fn mask_of(&self, s: &PairSet) -> Option<u128> {
        let mut mask = 0u128;
        for (i, j) in s.iter() {
            let bit = self.pairs.binary_search(&(i, j)).ok()?;
            mask |= 1 << bit;
        }
        Some(mask)
    }

    fn pair_set(&self, mask: u128) -> PairSet {
        PairSet::from_sorted_unchecked(
            self.pairs
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &p)| p)
                .collect(),
        )
    }
}

/// Visit every word of `S_n` with one accumulator per first letter; the
/// accumulators come back ordered by first letter.
fn scan_sn<T, I, V>(n: usize, init: I, visit: V) -> Vec<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    V: Fn(&mut T, &[usize]) + Sync,
{
    if n == 0 {
        let mut acc = init();
        visit(&mut acc, &[]);
        return vec![acc];
    }
    (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let mut word: Vec<usize> = std::iter::once(first)
                .chain((1..=n).filter(|&v| v != first))
                .collect();
            loop {
                visit(&mut acc, &word);
                if !next_permutation(&mut word[1..]) {
                    break;
                }
            }
            acc
        })
        .collect()
}

/// All `pi` in `S_n` with `inv_h(pi) = S`, in lexicographic order, by a full
/// scan of `S_n`.
pub fn enumerate_ih(
    h: &HSequence,
    s: &PairSet,
    n: usize,
    limits: &Limits,
) -> Result<Vec<Permutation>> {
    limits.check(n)?;
    let index = PairIndex::new(h, n);
    let Some(target) = index.mask_of(s) else {
        return Ok(Vec::new());
    };
    let chunks = scan_sn(n, Vec::new, |acc: &mut Vec<Permutation>, w| {
        if index.mask(w) == target {
            acc.push(Permutation::from_word_unchecked(w.to_vec()));
        }
    });
    Ok(chunks.into_iter().flatten().collect())
}

/// Every distinct h-inversion set over `S_n` with the number of permutations
/// realizing it. The keys are exactly the admissible sets with `j(S) <= n`.
pub fn enumerate_admissible(
    h: &HSequence,
    n: usize,
    limits: &Limits,
) -> Result<BTreeMap<PairSet, u64>> {
    limits.check(n)?;
    let index = PairIndex::new(h, n);
    let chunks = scan_sn(n, HashMap::new, |acc: &mut HashMap<u128, u64>, w| {
        *acc.entry(index.mask(w)).or_insert(0) += 1;
    });
    let mut merged: HashMap<u128, u64> = HashMap::new();
    for chunk in chunks {
        for (mask, count) in chunk {
            *merged.entry(mask).or_insert(0) += count;
        }
    }
    Ok(merged
        .into_iter()
        .map(|(mask, count)| (index.pair_set(mask), count))
        .collect())
}

/// Like [`enumerate_admissible`], but each class carries the length
/// generating function `sum q^len(pi)` of its permutations.
pub fn enumerate_admissible_graded(
    h: &HSequence,
    n: usize,
    limits: &Limits,
) -> Result<BTreeMap<PairSet, QPoly>> {
    limits.check(n)?;
    let index = PairIndex::new(h, n);
    let width = n * n.saturating_sub(1) / 2 + 1;
    let chunks = scan_sn(n, HashMap::new, |acc: &mut HashMap<u128, Vec<u64>>, w| {
        acc.entry(index.mask(w)).or_insert_with(|| vec![0; width])[word_length(w)] += 1;
    });
    let mut merged: HashMap<u128, Vec<u64>> = HashMap::new();
    for chunk in chunks {
        for (mask, counts) in chunk {
            let slot = merged.entry(mask).or_insert_with(|| vec![0; width]);
            for (a, b) in slot.iter_mut().zip(counts) {
                *a += b;
            }
        }
    }
    Ok(merged
        .into_iter()
        .map(|(mask, counts)| {
            let poly = QPoly::new(counts.into_iter().map(BigInt::from).collect());
            (index.pair_set(mask), poly)
        })
        .collect())
}

/// Whether some permutation of `[j(S)]` has h-inversion set exactly `S`.
pub fn is_realizable(h: &HSequence, s: &PairSet, limits: &Limits) -> Result<bool> {
    let n = s.j_of().unwrap_or(1);
    Ok(!enumerate_ih(h, s, n, limits)?.is_empty())
}

/// `sum over pi in S_n of t^(2 #inv_h(pi))`.
pub fn poincare(h: &HSequence, n: usize, limits: &Limits) -> Result<QPoly> {
    let classes = enumerate_admissible(h, n, limits)?;
    let mut poly = QPoly::zero();
    for (s, count) in classes {
        poly.add_term(2 * s.len(), &BigInt::from(count));
    }
    Ok(poly)
}

/// All `pi` in `S_n` with `inv_h(pi) = S`, in lexicographic order, built by
/// choosing `pi_1 .. pi_m` and filling the rest increasingly.
pub fn restricted_ih(h: &HSequence, s: &PairSet, n: usize) -> Result<Vec<Permutation>> {
    let Some(j) = s.j_of() else {
        return Ok(vec![Permutation::identity(n)]);
    };
    let m = s.m_of()?;
    if j > n || s.iter().any(|(i, jj)| i > m || jj > h.at(i)) {
        return Ok(Vec::new());
    }
    let mut in_s = vec![vec![false; n + 1]; n + 1];
    for (a, b) in s.iter() {
        in_s[a][b] = true;
    }
    let caps: Vec<usize> = (0..=n)
        .map(|i| if i == 0 { 0 } else { h.at(i).min(n) })
        .collect();
    let mut search = Search {
        n,
        m,
        caps: &caps,
        in_s: &in_s,
        word: vec![0; n + 1],
        used: vec![false; n + 1],
        out: Vec::new(),
    };
    search.place(1);
    Ok(search.out)
}

struct Search<'a> {
    n: usize,
    m: usize,
    caps: &'a [usize],
    in_s: &'a [Vec<bool>],
    word: Vec<usize>,
    used: Vec<bool>,
    out: Vec<Permutation>,
}

impl Search<'_> {
    fn place(&mut self, pos: usize) {
        if pos > self.m {
            self.finish();
            return;
        }
        for v in 1..=self.n {
            if self.used[v] {
                continue;
            }
            let consistent = (1..pos)
                .filter(|&k| pos <= self.caps[k])
                .all(|k| (self.word[k] > v) == self.in_s[k][pos]);
            if !consistent {
                continue;
            }
            self.word[pos] = v;
            self.used[v] = true;
            self.place(pos + 1);
            self.used[v] = false;
        }
    }

    fn finish(&mut self) {
        let mut pos = self.m;
        for v in 1..=self.n {
            if !self.used[v] {
                pos += 1;
                self.word[pos] = v;
            }
        }
        for i in 1..=self.m {
            for j in self.m + 1..=self.caps[i] {
                if (self.word[i] > self.word[j]) != self.in_s[i][j] {
                    return;
                }
            }
        }
        self.out
            .push(Permutation::from_word_unchecked(self.word[1..].to_vec()));
    }
}

/// `max sigma_k` over positions `k <= j(S)` with `h(k) >= j(S) + 1`.
///
/// Panics when `S` is empty.
pub fn t_of(sigma: &Permutation, h: &HSequence, s: &PairSet) -> usize {
    let j = s.j_of().expect("t is defined for nonempty S");
    (1..=j.min(sigma.len()))
        .filter(|&k| h.at(k) > j)
        .map(|k| sigma.at(k))
        .max()
        .expect("position j(S) always satisfies h(j) > j")
}

/// A permutation of `[j(S)]` with h-inversion set `S` and its value of `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDatum {
    pub sigma: Permutation,
    pub t_value: usize,
}

/// The flattening fibers' base points `I_h(S, j(S))` with their `t` values.
pub fn fiber_data(h: &HSequence, s: &PairSet) -> Result<Vec<FiberDatum>> {
    let j = s
        .j_of()
        .ok_or_else(|| Error::InvalidPairSet("S is empty".into()))?;
    Ok(restricted_ih(h, s, j)?
        .into_iter()
        .map(|sigma| {
            let t_value = t_of(&sigma, h, s);
            FiberDatum { sigma, t_value }
        })
        .collect())
}

/// `B_k(S, n)`: elements of `I_h(S, n)` with `pi_{h(m)} = k`.
pub fn b_k_set(h: &HSequence, s: &PairSet, n: usize, k: usize) -> Result<Vec<Permutation>> {
    let hm = h.at(s.m_of()?);
    if n < hm {
        return Err(Error::BelowFloor {
            n: n as i64,
            floor: hm as i64,
        });
    }
    Ok(restricted_ih(h, s, n)?
        .into_iter()
        .filter(|pi| pi.at(hm) == k)
        .collect())
}

/// `A*_k(S)`: elements of `I_h(S, m + h(m) - 1)` whose first `m` entries meet
/// `[h(m), ..]` in exactly `[h(m), h(m) + k - 1]`.
pub fn a_star_set(h: &HSequence, s: &PairSet, k: usize) -> Result<Vec<Permutation>> {
    let m = s.m_of()?;
    let hm = h.at(m);
    let n = m + hm - 1;
    Ok(restricted_ih(h, s, n)?
        .into_iter()
        .filter(|pi| {
            let mut high: Vec<usize> = pi.word()[..m]
                .iter()
                .copied()
                .filter(|&v| v >= hm)
                .collect();
            high.sort_unstable();
            high.iter().copied().eq(hm..hm + k)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::inv_h;

    fn ps(v: &[(usize, usize)]) -> PairSet {
        v.iter().copied().collect()
    }

    fn perms(v: &[&str]) -> Vec<Permutation> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn tail3_five_pairs() -> (HSequence, PairSet) {
        (
            HSequence::tail(3),
            ps(&[(3, 4), (3, 5), (3, 6), (4, 6), (5, 6)]),
        )
    }

    #[test]
    fn brute_force_classes() {
        let lim = Limits::default();
        let (h, s) = tail3_five_pairs();
        assert_eq!(
            enumerate_ih(&h, &s, 6, &lim).unwrap(),
            perms(&["126453", "136452", "236451"])
        );
        let s = ps(&[(1, 3), (2, 3), (2, 4)]);
        assert_eq!(
            enumerate_ih(&HSequence::tail(2), &s, 4, &lim).unwrap(),
            perms(&["2413", "3412"])
        );
        assert_eq!(
            enumerate_ih(&HSequence::tail(2), &PairSet::empty(), 4, &lim).unwrap(),
            perms(&["1234"])
        );
    }

    #[test]
    fn bound_is_enforced() {
        let err = enumerate_ih(&HSequence::tail(1), &PairSet::empty(), 5, &Limits::new(4));
        assert_eq!(err, Err(Error::BoundExceeded { n: 5, max: 4 }));
    }

    #[test]
    fn structured_matches_brute_force() {
        let lim = Limits::default();
        for h in [HSequence::tail(1), HSequence::tail(2), HSequence::tail(3)] {
            for n in 1..=6 {
                for s in enumerate_admissible(&h, n, &lim).unwrap().keys() {
                    for big in n..=7 {
                        assert_eq!(
                            restricted_ih(&h, s, big).unwrap(),
                            enumerate_ih(&h, s, big, &lim).unwrap(),
                            "h={h} S={s} n={big}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn t_values() {
        let (h, s) = tail3_five_pairs();
        assert_eq!(t_of(&"126453".parse().unwrap(), &h, &s), 5);
        let h = HSequence::tail(2);
        let s = ps(&[(1, 3), (2, 3), (2, 4)]);
        assert_eq!(t_of(&"2413".parse().unwrap(), &h, &s), 3);
        assert_eq!(t_of(&"3412".parse().unwrap(), &h, &s), 2);
    }

    #[test]
    fn b_sets() {
        let (h, s) = tail3_five_pairs();
        assert_eq!(
            b_k_set(&h, &s, 8, 7).unwrap(),
            perms(&["12845367", "13845267", "23845167"])
        );
        assert_eq!(
            b_k_set(&h, &s, 8, 8).unwrap(),
            perms(&["12645378", "12745368", "13645278", "13745268", "23645178", "23745168"])
        );
        assert!(b_k_set(&h, &s, 8, 2).unwrap().is_empty());
        assert!(b_k_set(&h, &s, 7, 7).is_err());
    }

    #[test]
    fn a_star_sets() {
        let h = HSequence::tail(2);
        let s = ps(&[(1, 3), (2, 3), (2, 4)]);
        assert_eq!(
            restricted_ih(&h, &s, 5).unwrap(),
            perms(&["24135", "25134", "34125", "35124", "45123"])
        );
        assert_eq!(a_star_set(&h, &s, 1).unwrap(), perms(&["24135", "34125"]));
        assert_eq!(a_star_set(&h, &s, 2).unwrap(), perms(&["45123"]));
        assert!(a_star_set(&h, &s, 0).unwrap().is_empty());
    }

    #[test]
    fn admissible_classes_for_descents() {
        let got = enumerate_admissible(&HSequence::tail(1), 3, &Limits::default()).unwrap();
        let want: BTreeMap<PairSet, u64> = [
            (PairSet::empty(), 1),
            (ps(&[(1, 2)]), 2),
            (ps(&[(2, 3)]), 2),
            (ps(&[(1, 2), (2, 3)]), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
        let one = enumerate_admissible(&HSequence::tail(2), 1, &Limits::default()).unwrap();
        assert_eq!(
            one.into_iter().collect::<Vec<_>>(),
            vec![(PairSet::empty(), 1)]
        );
    }

    #[test]
    fn admissible_classes_for_tail_2() {
        // S_3 with h(i) = i + 2: every inversion is visible
        let got = enumerate_admissible(&HSequence::tail(2), 3, &Limits::default()).unwrap();
        assert_eq!(got.len(), 6);
        assert!(got.values().all(|&c| c == 1));
        for w in ["123", "132", "213", "231", "312", "321"] {
            let pi: Permutation = w.parse().unwrap();
            assert_eq!(got[&inv_h(&HSequence::tail(2), &pi)], 1);
        }
    }

    #[test]
    fn poincare_polynomials() {
        let lim = Limits::default();
        assert_eq!(
            poincare(&HSequence::tail(1), 3, &lim).unwrap(),
            QPoly::from_i64s(&[1, 0, 4, 0, 1])
        );
        assert_eq!(
            poincare(&HSequence::full(3), 3, &lim).unwrap(),
            QPoly::from_i64s(&[1, 0, 2, 0, 2, 0, 1])
        );
        assert_eq!(
            poincare(&HSequence::tail(2), 1, &lim).unwrap(),
            QPoly::one()
        );
    }

    #[test]
    fn fibers() {
        let (h, s) = tail3_five_pairs();
        let data = fiber_data(&h, &s).unwrap();
        assert_eq!(data.len(), 3);
        assert!(data.iter().all(|d| d.t_value == 5));
    }

    #[test]
    fn graded_classes_specialize_to_counts() {
        let lim = Limits::default();
        for h in [HSequence::tail(1), HSequence::tail(2), HSequence::full(5)] {
            let counts = enumerate_admissible(&h, 5, &lim).unwrap();
            let graded = enumerate_admissible_graded(&h, 5, &lim).unwrap();
            assert_eq!(counts.len(), graded.len());
            for (s, c) in counts {
                assert_eq!(graded[&s].eval_at_one(), BigInt::from(c));
            }
        }
    }
}
