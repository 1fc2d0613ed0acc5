//! Finite posets on `[N]`, linear extensions and height sequences, and the
//! poset attached to an admissible set `S`:
//!
//! on `[h(m)]`, `j < i` whenever `(i, j)` is in `S`, and `i < j` whenever
//! `(i, j)` is a possible pair outside `S` with `j <= h(m)`.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{is_admissible, possible_pairs, HSequence, PairSet, Permutation};
use crate::poly::IntSequence;

const MAX_ELEMENTS: usize = 128;

/// A strict partial order on `1..=n`, stored as its transitive closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    // above[a] has bit b set iff a < b
    above: Vec<u128>,
}

impl Poset {
    /// The transitive closure of `relations`, each `(a, b)` meaning `a < b`.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Poset> {
        assert!(
            n < MAX_ELEMENTS,
            "posets are limited to {} elements",
            MAX_ELEMENTS - 1
        );
        let mut above = vec![0u128; n + 1];
        for &(a, b) in relations {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(Error::OutOfRange { v, n });
                }
            }
            above[a] |= 1 << b;
        }
        for k in 1..=n {
            for a in 1..=n {
                if above[a] >> k & 1 == 1 {
                    above[a] |= above[k];
                }
            }
        }
        if let Some(a) = (1..=n).find(|&a| above[a] >> a & 1 == 1) {
            return Err(Error::Cycle(a));
        }
        Ok(Poset { n, above })
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_relations(n, &[]).expect("no relations")
    }

    pub fn chain(n: usize) -> Poset {
        let rels: Vec<_> = (1..n).map(|a| (a, a + 1)).collect();
        Poset::from_relations(n, &rels).expect("a chain has no cycle")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `a < b` in the poset.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.above[a] >> b & 1 == 1
    }

    fn check(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::OutOfRange { v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn down_set(&self, v: usize) -> Vec<usize> {
        (1..=self.n).filter(|&w| self.lt(w, v)).collect()
    }

    pub fn up_set(&self, v: usize) -> Vec<usize> {
        (1..=self.n).filter(|&w| self.lt(v, w)).collect()
    }

    /// Cover relations `a < b` with nothing strictly between, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 1..=self.n {
            for b in 1..=self.n {
                if self.lt(a, b) && !(1..=self.n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (1..=self.n).filter(|&a| self.above[a] == 0).collect()
    }

    /// Calls `f` on each linear extension, in lexicographic order.
    pub fn for_each_linear_extension(&self, mut f: impl FnMut(&[usize])) {
        let mut below_count: Vec<usize> = (0..=self.n)
            .map(|b| if b == 0 { 0 } else { self.down_set(b).len() })
            .collect();
        let mut word = Vec::with_capacity(self.n);
        let mut placed = vec![false; self.n + 1];
        self.extend(&mut word, &mut placed, &mut below_count, &mut f);
    }

    fn extend(
        &self,
        word: &mut Vec<usize>,
        placed: &mut [bool],
        below_count: &mut [usize],
        f: &mut impl FnMut(&[usize]),
    ) {
        if word.len() == self.n {
            f(word);
            return;
        }
        for v in 1..=self.n {
            if placed[v] || below_count[v] != 0 {
                continue;
            }
            placed[v] = true;
            word.push(v);
            for w in self.up_set(v) {
                below_count[w] -= 1;
            }
            self.extend(word, placed, below_count, f);
            for w in self.up_set(v) {
                below_count[w] += 1;
            }
            word.pop();
            placed[v] = false;
        }
    }

    pub fn linear_extensions(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        self.for_each_linear_extension(|w| out.push(Permutation::from_word_unchecked(w.to_vec())));
        out
    }

    /// `(h_k)` for `0 <= k < n`: the number of linear extensions with exactly
    /// `k` elements before `v`.
    pub fn height_sequence(&self, v: usize) -> Result<IntSequence> {
        self.check(v)?;
        let mut counts = vec![0u64; self.n];
        self.for_each_linear_extension(|w| {
            let pos = w
                .iter()
                .position(|&x| x == v)
                .expect("v is in every extension");
            counts[pos] += 1;
        });
        Ok(IntSequence::new(
            0,
            counts.into_iter().map(BigInt::from).collect(),
        ))
    }

    /// `(#down(v), n - #up(v) - 1)`, the range outside which `h_k(P, v)` is 0.
    pub fn height_support_bounds(&self, v: usize) -> Result<(usize, usize)> {
        self.check(v)?;
        Ok((self.down_set(v).len(), self.n - self.up_set(v).len() - 1))
    }
}

#[derive(Serialize, Deserialize)]
struct RawPoset {
    n: usize,
    covers: Vec<(usize, usize)>,
}

impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawPoset {
            n: self.n,
            covers: self.covers(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPoset::deserialize(d)?;
        if raw.n >= MAX_ELEMENTS {
            return Err(serde::de::Error::custom("poset too large"));
        }
        Poset::from_relations(raw.n, &raw.covers).map_err(serde::de::Error::custom)
    }
}

/// A random poset on `n` elements: a DAG along a shuffled order, each edge
/// present with probability `num / den`, then closed transitively.
pub fn random_poset<R: Rng + ?Sized>(rng: &mut R, n: usize, num: u32, den: u32) -> Poset {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_ratio(num, den) {
                rels.push((order[i], order[j]));
            }
        }
    }
    Poset::from_relations(n, &rels).expect("edges follow a total order")
}

fn admissible_descent(h: &HSequence, s: &PairSet) -> Result<usize> {
    if !is_admissible(h, s) {
        return Err(Error::NotAdmissible(s.clone()));
    }
    s.m_of()
}

/// The poset attached to a nonempty admissible `S`, on `[h(m)]`.
pub fn build_poset(h: &HSequence, s: &PairSet) -> Result<Poset> {
    let hm = h.at(admissible_descent(h, s)?);
    let mut rels = Vec::new();
    for (i, j) in possible_pairs(h, hm).iter() {
        if s.contains(i, j) {
            rels.push((j, i));
        } else {
            rels.push((i, j));
        }
    }
    Poset::from_relations(hm, &rels)
}

/// `(b_k)` for `h(m) - m <= k <= h(m)`, read off as `b_k = h_{k-1}(P, h(m))`.
pub fn b_from_heights(h: &HSequence, s: &PairSet) -> Result<IntSequence> {
    let m = admissible_descent(h, s)?;
    let hm = h.at(m);
    let heights = build_poset(h, s)?.height_sequence(hm)?;
    let lo = hm - m;
    Ok(IntSequence::new(
        lo as i64,
        (lo..=hm).map(|k| heights.get(k as i64 - 1)).collect(),
    ))
}

/// Number of `i` in `[h(m)]` with `i <= h(m)` in the attached poset.
pub fn d_s_of(h: &HSequence, s: &PairSet) -> Result<usize> {
    let hm = h.at(admissible_descent(h, s)?);
    let p = build_poset(h, s)?;
    Ok(1 + p.down_set(hm).len())
}

/// Number of `i` in `[h(m)]` joined to `h(m)` by an increasing chain
/// `i = i_1 < ... < i_l = h(m)` of possible pairs outside `S`.
pub fn d_s_by_chains(h: &HSequence, s: &PairSet) -> Result<usize> {
    let hm = h.at(admissible_descent(h, s)?);
    let mut reaches = vec![false; hm + 1];
    reaches[hm] = true;
    for i in (1..hm).rev() {
        reaches[i] = (i + 1..=h.at(i).min(hm)).any(|j| reaches[j] && !s.contains(i, j));
    }
    Ok(reaches.iter().filter(|&&r| r).count())
}

/// `h(m)` is the unique maximal element of the attached poset.
pub fn is_constant_by_poset(h: &HSequence, s: &PairSet) -> Result<bool> {
    if s.is_empty() && is_admissible(h, s) {
        return Ok(true);
    }
    let hm = h.at(admissible_descent(h, s)?);
    Ok(build_poset(h, s)?.maximal_elements() == vec![hm])
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn ps(v: &[(usize, usize)]) -> PairSet {
        v.iter().copied().collect()
    }

    fn perms(v: &[&str]) -> Vec<Permutation> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn six_element_poset() -> Poset {
        Poset::from_relations(6, &[(1, 2), (2, 3), (2, 4), (3, 5), (5, 6), (4, 6)]).unwrap()
    }

    fn tail2_four_pairs() -> (HSequence, PairSet) {
        (HSequence::tail(2), ps(&[(1, 3), (2, 3), (2, 4), (3, 4)]))
    }

    #[test]
    fn extensions_and_heights_of_six_element_poset() {
        let p = six_element_poset();
        assert_eq!(
            p.linear_extensions(),
            perms(&["123456", "123546", "124356"])
        );
        let heights: Vec<Vec<i64>> = (1..=6)
            .map(|v| {
                p.height_sequence(v)
                    .unwrap()
                    .values
                    .iter()
                    .map(|x| i64::try_from(x).unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(
            heights,
            vec![
                vec![3, 0, 0, 0, 0, 0],
                vec![0, 3, 0, 0, 0, 0],
                vec![0, 0, 2, 1, 0, 0],
                vec![0, 0, 1, 1, 1, 0],
                vec![0, 0, 0, 1, 2, 0],
                vec![0, 0, 0, 0, 0, 3],
            ]
        );
        assert_eq!(p.height_support_bounds(4).unwrap(), (2, 4));
        assert!(p.height_sequence(7).is_err());
    }

    #[test]
    fn trivial_posets() {
        assert_eq!(
            Poset::antichain(2).linear_extensions(),
            perms(&["12", "21"])
        );
        assert_eq!(
            Poset::antichain(5).height_support_bounds(3).unwrap(),
            (0, 4)
        );
        assert_eq!(Poset::chain(5).height_support_bounds(5).unwrap(), (4, 4));
    }

    #[test]
    fn cycles_are_detected() {
        assert_eq!(
            Poset::from_relations(3, &[(1, 2), (2, 3), (3, 1)]),
            Err(Error::Cycle(1))
        );
        assert!(Poset::from_relations(2, &[(1, 3)]).is_err());
    }

    #[test]
    fn attached_poset_of_the_running_example() {
        let (h, s) = tail2_four_pairs();
        let p = build_poset(&h, &s).unwrap();
        assert_eq!(p.covers(), vec![(1, 2), (3, 1), (3, 5), (4, 3)]);
        assert_eq!(p.linear_extensions(), perms(&["43125", "43152", "43512"]));
        assert_eq!(
            b_from_heights(&h, &s).unwrap(),
            IntSequence::from_i64s(2, &[0, 1, 1, 1])
        );
        assert_eq!(d_s_of(&h, &s).unwrap(), 3);
        assert_eq!(d_s_by_chains(&h, &s).unwrap(), 3);
    }

    #[test]
    fn constant_example() {
        let h = HSequence::new(vec![2, 4, 4, 5], 1).unwrap();
        let s = ps(&[(2, 3)]);
        let p = build_poset(&h, &s).unwrap();
        assert_eq!(p.maximal_elements(), vec![4]);
        assert_eq!(d_s_of(&h, &s).unwrap(), 4);
        assert_eq!(d_s_by_chains(&h, &s).unwrap(), 4);
        assert!(is_constant_by_poset(&h, &s).unwrap());
        let b = b_from_heights(&h, &s).unwrap();
        assert_eq!(b, IntSequence::from_i64s(2, &[0, 0, 2]));
    }

    #[test]
    fn single_descent() {
        let h = HSequence::tail(1);
        let s = ps(&[(1, 2)]);
        let p = build_poset(&h, &s).unwrap();
        assert_eq!(p.covers(), vec![(2, 1)]);
        assert_eq!(d_s_of(&h, &s).unwrap(), 1);
        assert!(!is_constant_by_poset(&h, &s).unwrap());
    }

    #[test]
    fn json_uses_covers() {
        let p = six_element_poset();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"n":6,"covers":[[1,2],[2,3],[2,4],[3,5],[4,6],[5,6]]}"#
        );
        assert_eq!(serde_json::from_str::<Poset>(&s).unwrap(), p);
    }

    #[test]
    fn random_posets_are_reproducible() {
        let a = random_poset(&mut ChaCha8Rng::seed_from_u64(7), 6, 1, 3);
        let b = random_poset(&mut ChaCha8Rng::seed_from_u64(7), 6, 1, 3);
        assert_eq!(a, b);
        assert!(!a.linear_extensions().is_empty());
    }
}
