//! Closed-form expansions of the restricted inversion polynomial
//! `I_h(S; n) = #{pi in S_n : inv_h(pi) = S}` in binomial bases.
//!
//! * fiber basis: one term `C(n - t, j - t)` per `sigma` in `I_h(S, j(S))`,
//!   where `t = t(sigma)`;
//! * b basis: `sum_k b_k C(n - k, h(m) - k)` with `b_k = #B_k(S, h(m))`;
//! * a basis: `sum_k a_k C(n - h(m) + 1, k)` with `a_k = #A*_k(S)`.
//!
//! The empty set is special-cased to the constant polynomial 1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::enumeration::{fiber_data, restricted_ih};
use crate::error::{Error, Result};
use crate::model::{is_admissible, HSequence, PairSet};
use crate::poly::{binom, BinomialPoly, BinomialTerm, IntSequence, MonomialPoly};
use crate::poset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Fiber,
    B,
    A,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Fiber => "fiber",
            Basis::B => "b",
            Basis::A => "a",
        })
    }
}

impl std::str::FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fiber" => Ok(Basis::Fiber),
            "b" => Ok(Basis::B),
            "a" => Ok(Basis::A),
            other => Err(format!("unknown basis {other:?}; expected fiber, b or a")),
        }
    }
}

/// An expansion of `I_h(S; n)` together with its named coefficients.
///
/// For the fiber basis `coeffs` is indexed by `t` and counts the `sigma` with
/// `t(sigma) = t`; for the b basis it is `(b_k)` for `h(m) - m <= k <= h(m)`;
/// for the a basis `(a_k)` for `0 <= k <= m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionResult {
    pub basis: Basis,
    pub poly: BinomialPoly,
    pub coeffs: IntSequence,
    /// Smallest `n` from which the formula is presented as a count.
    pub validity_floor: i64,
}

impl ExpansionResult {
    /// The formula's value as a count of permutations of `[n]`.
    pub fn count(&self, n: i64) -> Result<BigInt> {
        if n < self.validity_floor {
            return Err(Error::BelowFloor {
                n,
                floor: self.validity_floor,
            });
        }
        Ok(self.poly.eval(n))
    }

    /// The polynomial's value at any integer, with no count semantics.
    pub fn eval_raw(&self, n: i64) -> BigInt {
        self.poly.eval(n)
    }

    pub fn to_monomial(&self) -> MonomialPoly {
        self.poly.to_monomial()
    }
}

fn require_admissible(h: &HSequence, s: &PairSet) -> Result<()> {
    if is_admissible(h, s) {
        Ok(())
    } else {
        Err(Error::NotAdmissible(s.clone()))
    }
}

fn constant_one(basis: Basis) -> ExpansionResult {
    ExpansionResult {
        basis,
        poly: BinomialPoly::constant(1),
        coeffs: IntSequence::new(0, Vec::new()),
        validity_floor: 1,
    }
}

fn counts(origin: usize, len: usize, indices: impl IntoIterator<Item = usize>) -> IntSequence {
    let mut values = vec![BigInt::zero(); len];
    for k in indices {
        values[k - origin] += 1;
    }
    IntSequence::new(origin as i64, values)
}

pub fn fiber_expansion(h: &HSequence, s: &PairSet) -> Result<ExpansionResult> {
    require_admissible(h, s)?;
    let Some(j) = s.j_of() else {
        return Ok(constant_one(Basis::Fiber));
    };
    let data = fiber_data(h, s)?;
    let poly = BinomialPoly::from_terms(data.iter().map(|d| BinomialTerm {
        c: BigInt::from(1),
        s: d.t_value as i64,
        d: (j - d.t_value) as u32,
    }));
    Ok(ExpansionResult {
        basis: Basis::Fiber,
        poly,
        coeffs: counts(1, j, data.iter().map(|d| d.t_value)),
        validity_floor: j as i64,
    })
}

pub fn b_expansion(h: &HSequence, s: &PairSet) -> Result<ExpansionResult> {
    require_admissible(h, s)?;
    if s.is_empty() {
        return Ok(constant_one(Basis::B));
    }
    let m = s.m_of()?;
    let hm = h.at(m);
    let lo = hm - m;
    let perms = restricted_ih(h, s, hm)?;
    let coeffs = counts(lo, m + 1, perms.iter().map(|pi| pi.at(hm)));
    let poly = BinomialPoly::from_terms(coeffs.iter().map(|(k, c)| BinomialTerm {
        c: c.clone(),
        s: k,
        d: (hm as i64 - k) as u32,
    }));
    Ok(ExpansionResult {
        basis: Basis::B,
        poly,
        coeffs,
        validity_floor: hm as i64,
    })
}

pub fn a_expansion(h: &HSequence, s: &PairSet) -> Result<ExpansionResult> {
    require_admissible(h, s)?;
    let Some(j) = s.j_of() else {
        return Ok(constant_one(Basis::A));
    };
    let m = s.m_of()?;
    let hm = h.at(m);
    let perms = restricted_ih(h, s, m + hm - 1)?;
    let interval_sizes = perms.iter().filter_map(|pi| {
        let mut high: Vec<usize> = pi.word()[..m]
            .iter()
            .copied()
            .filter(|&v| v >= hm)
            .collect();
        high.sort_unstable();
        let k = high.len();
        high.iter().copied().eq(hm..hm + k).then_some(k)
    });
    let coeffs = counts(0, m + 1, interval_sizes);
    let poly = BinomialPoly::from_terms(coeffs.iter().map(|(k, c)| BinomialTerm {
        c: c.clone(),
        s: hm as i64 - 1,
        d: k as u32,
    }));
    Ok(ExpansionResult {
        basis: Basis::A,
        poly,
        coeffs,
        validity_floor: j as i64,
    })
}

pub fn expansion(h: &HSequence, s: &PairSet, basis: Basis) -> Result<ExpansionResult> {
    match basis {
        Basis::Fiber => fiber_expansion(h, s),
        Basis::B => b_expansion(h, s),
        Basis::A => a_expansion(h, s),
    }
}

/// Convert `(b_k)` for `h(m) - m <= k <= h(m)` into `(a_k)` for `0 <= k <= m`:
/// `a_0 = b_{h(m)}` and `a_k = sum_{j=k}^{m} C(j-1, k-1) b_{h(m)-j}`.
pub fn a_from_b(b: &IntSequence, m: usize, hm: usize) -> Result<IntSequence> {
    if m == 0 || hm < m || b.origin != (hm - m) as i64 || b.len() != m + 1 {
        return Err(Error::IndexShape(format!(
            "expected b indexed {}..={hm}, got {}..={}",
            hm as i64 - m as i64,
            b.origin,
            b.end()
        )));
    }
    let hm = hm as i64;
    let mut a = vec![b.get(hm)];
    for k in 1..=m as i64 {
        let ak: BigInt = (k..=m as i64)
            .map(|j| binom(j - 1, (k - 1) as u32) * b.get(hm - j))
            .sum();
        a.push(ak);
    }
    Ok(IntSequence::new(0, a))
}

/// `h(m) - d_S`, where `d_S` counts the elements weakly below `h(m)` in the
/// poset attached to `S`.
pub fn degree_of(h: &HSequence, s: &PairSet) -> Result<usize> {
    require_admissible(h, s)?;
    if s.is_empty() {
        return Ok(0);
    }
    let hm = h.at(s.m_of()?);
    Ok(hm - poset::d_s_of(h, s)?)
}

/// True when no `i <= m` has both `(i, j) in S` for every `i < j <= h(i)` and
/// `(k, i)` outside `S` for every `k < i <= h(k)`.
pub fn is_constant(h: &HSequence, s: &PairSet) -> Result<bool> {
    require_admissible(h, s)?;
    if s.is_empty() {
        return Ok(true);
    }
    let m = s.m_of()?;
    let blocking = (1..=m).any(|i| {
        let above_all_later = (i + 1..=h.at(i)).all(|j| s.contains(i, j));
        let above_all_earlier = (1..i).filter(|&k| i <= h.at(k)).all(|k| !s.contains(k, i));
        above_all_later && above_all_earlier
    });
    Ok(!blocking)
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;

    fn ps(v: &[(usize, usize)]) -> PairSet {
        v.iter().copied().collect()
    }

    fn term(c: i64, s: i64, d: u32) -> BinomialTerm {
        BinomialTerm {
            c: BigInt::from(c),
            s,
            d,
        }
    }

    fn seq(origin: i64, v: &[i64]) -> IntSequence {
        IntSequence::from_i64s(origin, v)
    }

    fn tail3_five_pairs() -> (HSequence, PairSet) {
        (
            HSequence::tail(3),
            ps(&[(3, 4), (3, 5), (3, 6), (4, 6), (5, 6)]),
        )
    }

    fn tail2_three_pairs() -> (HSequence, PairSet) {
        (HSequence::tail(2), ps(&[(1, 3), (2, 3), (2, 4)]))
    }

    fn tail2_four_pairs() -> (HSequence, PairSet) {
        (HSequence::tail(2), ps(&[(1, 3), (2, 3), (2, 4), (3, 4)]))
    }

    #[test]
    fn fiber_basis() {
        let (h, s) = tail3_five_pairs();
        let e = fiber_expansion(&h, &s).unwrap();
        assert_eq!(e.poly.terms(), &[term(3, 5, 1)]);
        assert_eq!(e.validity_floor, 6);

        let (h, s) = tail2_three_pairs();
        let e = fiber_expansion(&h, &s).unwrap();
        assert_eq!(
            e.poly,
            BinomialPoly::from_terms([term(1, 2, 2), term(1, 3, 1)])
        );

        let e = fiber_expansion(&HSequence::tail(1), &ps(&[(1, 2)])).unwrap();
        assert_eq!(e.poly.terms(), &[term(1, 1, 1)]);
        let values: Vec<BigInt> = (2..=4).map(|n| e.count(n).unwrap()).collect();
        assert_eq!(values, vec![1.into(), 2.into(), 3.into()]);
    }

    #[test]
    fn b_basis() {
        let (h, s) = tail2_three_pairs();
        let e = b_expansion(&h, &s).unwrap();
        assert_eq!(e.coeffs, seq(2, &[1, 1, 0]));
        assert_eq!(
            e.poly,
            BinomialPoly::from_terms([term(1, 2, 2), term(1, 3, 1)])
        );

        let (h, s) = tail3_five_pairs();
        let e = b_expansion(&h, &s).unwrap();
        assert_eq!(e.coeffs, seq(3, &[0, 0, 0, 0, 3, 6]));
        assert_eq!(e.to_monomial().to_string(), "3n - 15");

        let (h, s) = tail2_four_pairs();
        assert_eq!(b_expansion(&h, &s).unwrap().coeffs, seq(2, &[0, 1, 1, 1]));
    }

    #[test]
    fn a_basis() {
        let (h, s) = tail2_three_pairs();
        let e = a_expansion(&h, &s).unwrap();
        assert_eq!(e.coeffs, seq(0, &[0, 2, 1]));
        assert_eq!(
            e.poly,
            BinomialPoly::from_terms([term(2, 3, 1), term(1, 3, 2)])
        );

        let e = a_expansion(&HSequence::tail(1), &ps(&[(1, 2)])).unwrap();
        assert_eq!(e.coeffs, seq(0, &[0, 1]));
        assert_eq!(e.poly.terms(), &[term(1, 1, 1)]);
    }

    #[test]
    fn seven_pair_set_expansions() {
        let h = HSequence::new(vec![5, 5, 6, 6, 7, 7], 1).unwrap();
        let s = ps(&[(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4)]);
        let b = b_expansion(&h, &s).unwrap();
        assert_eq!(b.coeffs, seq(3, &[0, 1, 1, 1]));
        let a = a_expansion(&h, &s).unwrap();
        assert_eq!(a.coeffs, seq(0, &[1, 2, 1, 0]));
        assert_eq!(a.to_monomial(), b.to_monomial());
        assert_eq!(b.count(7).unwrap(), binom(4, 2));
    }

    #[test]
    fn three_bases_agree() {
        for (h, s) in [tail3_five_pairs(), tail2_three_pairs(), tail2_four_pairs()] {
            let f = fiber_expansion(&h, &s).unwrap().to_monomial();
            assert_eq!(b_expansion(&h, &s).unwrap().to_monomial(), f);
            assert_eq!(a_expansion(&h, &s).unwrap().to_monomial(), f);
        }
    }

    #[test]
    fn b_to_a_conversion() {
        let a = a_from_b(&seq(3, &[0, 0, 0, 0, 3, 6]), 5, 8).unwrap();
        assert_eq!(a, seq(0, &[6, 3, 0, 0, 0, 0]));
        let a = a_from_b(&seq(2, &[1, 1, 0]), 2, 4).unwrap();
        assert_eq!(a, seq(0, &[0, 2, 1]));
        let a = a_from_b(&seq(1, &[0, 0, 5]), 2, 3).unwrap();
        assert_eq!(a, seq(0, &[5, 0, 0]));
        assert!(matches!(
            a_from_b(&seq(0, &[1, 1]), 2, 4),
            Err(Error::IndexShape(_))
        ));
    }

    #[test]
    fn floors_guard_counts() {
        let (h, s) = tail3_five_pairs();
        let e = fiber_expansion(&h, &s).unwrap();
        assert_eq!(e.count(5), Err(Error::BelowFloor { n: 5, floor: 6 }));
        assert_eq!(e.eval_raw(4), BigInt::from(-3));
        assert_eq!(b_expansion(&h, &s).unwrap().validity_floor, 8);
    }

    #[test]
    fn empty_set_is_constant_one() {
        let h = HSequence::tail(2);
        for basis in [Basis::Fiber, Basis::B, Basis::A] {
            let e = expansion(&h, &PairSet::empty(), basis).unwrap();
            assert_eq!(
                e.to_monomial(),
                MonomialPoly::new(vec![BigRational::from_integer(1.into())])
            );
        }
        assert_eq!(degree_of(&h, &PairSet::empty()).unwrap(), 0);
    }

    #[test]
    fn inadmissible_sets_are_rejected() {
        let h = HSequence::tail(2);
        let s = ps(&[(1, 3)]);
        for basis in [Basis::Fiber, Basis::B, Basis::A] {
            assert_eq!(
                expansion(&h, &s, basis),
                Err(Error::NotAdmissible(s.clone()))
            );
        }
    }

    #[test]
    fn degrees_and_constancy() {
        let (h, s) = tail2_four_pairs();
        assert_eq!(degree_of(&h, &s).unwrap(), 2);
        let (h, s) = tail3_five_pairs();
        assert_eq!(degree_of(&h, &s).unwrap(), 1);
        assert_eq!(degree_of(&HSequence::tail(1), &ps(&[(1, 2)])).unwrap(), 1);

        let h = HSequence::new(vec![2, 4, 4, 5], 1).unwrap();
        assert!(is_constant(&h, &ps(&[(2, 3)])).unwrap());
        let h = HSequence::new(vec![3, 4, 6, 7, 7], 2).unwrap();
        assert!(!is_constant(&h, &ps(&[(2, 4), (3, 4), (3, 5), (3, 6)])).unwrap());
        assert!(!is_constant(&HSequence::tail(1), &ps(&[(1, 2)])).unwrap());
    }

    #[test]
    fn raw_evaluation_below_floor() {
        let h = HSequence::new(vec![3, 4, 6, 7, 7], 2).unwrap();
        let s = ps(&[(2, 4), (3, 4), (3, 5), (3, 6)]);
        let e = b_expansion(&h, &s).unwrap();
        assert_eq!(e.eval_raw(6), BigInt::from(9));
        assert_eq!(e.eval_raw(7), BigInt::from(23));
    }
}
