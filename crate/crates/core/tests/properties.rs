use std::collections::BTreeSet;

use invpoly::model::is_admissible_in_window;
use invpoly::poly::{binom, q_binom, q_binom_by_factorials, q_binom_by_subsets, BinomialTerm};
use invpoly::sweep::corpus;
use invpoly::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Weakly increasing prefixes with `h(i) > i`, joined to a tail `i + t`.
fn h_strategy() -> impl Strategy<Value = HSequence> {
    (prop::collection::vec(0usize..3, 0..5), 1usize..4).prop_filter_map(
        "prefix must meet its tail",
        |(bumps, tail)| {
            let mut prefix = Vec::new();
            let mut prev = 0;
            for (idx, b) in bumps.into_iter().enumerate() {
                let v = (idx + 2 + b).max(prev);
                prefix.push(v);
                prev = v;
            }
            HSequence::new(prefix, tail).ok()
        },
    )
}

fn perm_strategy(max: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
}

fn local_inv(h: &HSequence, w: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=w.len() {
        for j in i + 1..=h.at(i).min(w.len()) {
            if w[i - 1] > w[j - 1] {
                out.push((i, j));
            }
        }
    }
    out
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for v in 1..=n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..=w.len()).map(move |pos| {
                    let mut x = w.clone();
                    x.insert(pos, v);
                    x
                })
            })
            .collect();
    }
    out
}

fn realized(h: &HSequence, n: usize) -> BTreeSet<Vec<(usize, usize)>> {
    all_perms(n).iter().map(|w| local_inv(h, w)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn admissible_iff_realized(h in h_strategy(), n in 2usize..=6, bits in any::<u32>()) {
        let pairs = possible_pairs(&h, n);
        let chosen: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(idx, _)| bits >> (idx % 32) & 1 == 1)
            .map(|(_, p)| p)
            .collect();
        let s = PairSet::new(chosen.clone()).unwrap();
        let found = realized(&h, n).contains(&chosen);
        prop_assert_eq!(is_admissible(&h, &s), found, "{} {}", h, s);
        if let Some(j) = s.j_of() {
            prop_assert_eq!(
                is_admissible_in_window(&h, &s, j),
                is_admissible_in_window(&h, &s, j + 2)
            );
        }
    }

    #[test]
    fn flattening_keeps_order_and_inversions(w in perm_strategy(9), k in 0usize..10, h in h_strategy()) {
        let k = k.min(w.len());
        let pi = Permutation::new(w.clone()).unwrap();
        let f = pi.flatten(k);
        prop_assert_eq!(f.len(), k);
        for a in 0..k {
            for b in 0..k {
                prop_assert_eq!(f.word()[a] < f.word()[b], w[a] < w[b]);
            }
        }
        let restricted: Vec<_> = local_inv(&h, &w).into_iter().filter(|&(_, j)| j <= k).collect();
        prop_assert_eq!(inv_h(&h, &f).pairs().to_vec(), restricted);
    }

    #[test]
    fn monomial_matches_binomial(terms in prop::collection::vec((-20i64..20, -5i64..8, 0u32..6), 0..6)) {
        let poly = BinomialPoly::from_terms(
            terms.into_iter().map(|(c, s, d)| BinomialTerm { c: c.into(), s, d }),
        );
        let mono = poly.to_monomial();
        for n in -10..=20 {
            prop_assert_eq!(mono.eval(n), BigRational::from_integer(poly.eval(n)));
        }
    }

    #[test]
    fn pf2_iff_log_concave_without_gaps(v in prop::collection::vec(0i64..=20, 1..=8)) {
        let seq = IntSequence::from_i64s(0, &v);
        let lc = (1..v.len().saturating_sub(1)).all(|i| v[i] * v[i] >= v[i - 1] * v[i + 1]);
        let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
        let contiguous = nz.is_empty() || nz[nz.len() - 1] - nz[0] + 1 == nz.len();
        prop_assert_eq!(seq.is_log_concave(), lc);
        prop_assert_eq!(seq.has_no_internal_zeros(), contiguous);
        prop_assert_eq!(seq.is_pf2().unwrap(), lc && contiguous);
    }
}

#[test]
fn q_binomials_agree_three_ways() {
    for n in 0..=12 {
        for k in 0..=n {
            let r = q_binom(n, k as i64);
            assert_eq!(r, q_binom_by_factorials(n, k), "n={n} k={k}");
            assert_eq!(r, q_binom_by_subsets(1, n, k), "n={n} k={k}");
            assert_eq!(r.eval_at_one(), binom(n as i64, k as u32));
        }
    }
}

fn small_family() -> Vec<HSequence> {
    vec![
        HSequence::tail(1),
        HSequence::tail(2),
        HSequence::new(vec![2, 4, 4, 5], 1).unwrap(),
        HSequence::new(vec![3, 4, 6, 7, 7], 2).unwrap(),
    ]
}

#[test]
fn structured_enumeration_matches_scan() {
    let lim = Limits::default();
    for h in small_family() {
        for s in corpus(&h, 5, &lim).unwrap() {
            for n in s.j_of().unwrap()..=7 {
                let fast = restricted_ih(&h, &s, n).unwrap();
                let scan: Vec<Permutation> = all_perms(n)
                    .into_iter()
                    .filter(|w| local_inv(&h, w) == s.pairs())
                    .map(|w| Permutation::new(w).unwrap())
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                assert_eq!(fast, scan, "{h} {s} n={n}");
            }
        }
    }
}

#[test]
fn fibers_and_b_classes_have_binomial_sizes() {
    let lim = Limits::default();
    for h in small_family() {
        for s in corpus(&h, 5, &lim).unwrap() {
            let j = s.j_of().unwrap();
            let hm = h.at(s.m_of().unwrap());
            let data = fiber_data(&h, &s).unwrap();
            let b = b_expansion(&h, &s).unwrap();
            for n in j..=8 {
                let members = restricted_ih(&h, &s, n).unwrap();
                for d in &data {
                    let size = members.iter().filter(|pi| pi.flatten(j) == d.sigma).count();
                    let t = d.t_value as i64;
                    assert_eq!(
                        BigInt::from(size),
                        binom(n as i64 - t, (j as i64 - t) as u32),
                        "{h} {s} n={n} sigma={}",
                        d.sigma
                    );
                }
                if n < hm {
                    continue;
                }
                for k in 1..=n {
                    let size = b_k_set(&h, &s, n, k).unwrap().len();
                    let want = if k > hm {
                        BigInt::from(0)
                    } else {
                        b.coeffs.get(k as i64) * binom((n - k) as i64, (hm - k) as u32)
                    };
                    assert_eq!(BigInt::from(size), want, "{h} {s} n={n} k={k}");
                }
            }
        }
    }
}
