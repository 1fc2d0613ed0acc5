//! Length generating functions over `I_h(S, n)` and their expansion in
//! Gaussian binomials, plus the sweep for strong q-log-concavity of the
//! graded `b` coefficients.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::{enumerate_admissible, enumerate_ih, restricted_ih, Limits};
use crate::error::{Error, Result};
use crate::model::{is_admissible, HSequence, PairSet, Permutation};
use crate::poly::{
    q_binom, strong_q_log_concavity_violation, subset_length, QLogConcavityViolation, QPoly,
};

/// `sum q^{len(w)}` over `I_h(S, n)`, by brute force over `S_n`.
pub fn graded_ih_oracle(h: &HSequence, s: &PairSet, n: usize, limits: &Limits) -> Result<QPoly> {
    Ok(length_gf(&enumerate_ih(h, s, n, limits)?))
}

fn length_gf(perms: &[Permutation]) -> QPoly {
    let mut out = QPoly::zero();
    for pi in perms {
        out.add_term(pi.length(), &1.into());
    }
    out
}

/// `b_k(S; q)` for `h(m) - m <= k <= h(m)`; `b_q[i]` holds `k = h(m) - m + i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedExpansion {
    pub hm: usize,
    pub m: usize,
    pub b_q: Vec<QPoly>,
}

impl GradedExpansion {
    pub fn lowest_k(&self) -> usize {
        self.hm - self.m
    }

    pub fn b(&self, k: usize) -> QPoly {
        k.checked_sub(self.lowest_k())
            .and_then(|i| self.b_q.get(i))
            .cloned()
            .unwrap_or_default()
    }
}

pub fn b_q_coefficients(h: &HSequence, s: &PairSet) -> Result<GradedExpansion> {
    if !is_admissible(h, s) {
        return Err(Error::NotAdmissible(s.clone()));
    }
    let m = s.m_of()?;
    let hm = h.at(m);
    let mut b_q = vec![QPoly::zero(); m + 1];
    for pi in restricted_ih(h, s, hm)? {
        let k = pi.at(hm);
        b_q[k - (hm - m)].add_term(pi.length(), &1.into());
    }
    Ok(GradedExpansion { hm, m, b_q })
}

/// `sum_k b_k(S; q) [n - k choose h(m) - k]_q`, for `n >= h(m)`.
pub fn graded_expansion_eval(ge: &GradedExpansion, n: usize) -> Result<QPoly> {
    if n < ge.hm {
        return Err(Error::BelowFloor {
            n: n as i64,
            floor: ge.hm as i64,
        });
    }
    let mut out = QPoly::zero();
    for (i, b) in ge.b_q.iter().enumerate() {
        let k = ge.lowest_k() + i;
        out += &(b * &q_binom(n - k, (ge.hm - k) as i64));
    }
    Ok(out)
}

/// Checks `len(pi) = len(pi|h(m)) + len_[k+1,n]([k+1,n] \ tail values)`
/// for every `pi` in `I_h(S, n)`, where `k = pi(h(m))`.
pub fn length_split_check(h: &HSequence, s: &PairSet, n: usize, limits: &Limits) -> Result<bool> {
    limits.check(n)?;
    let hm = h.at(s.m_of()?);
    if n < hm {
        return Err(Error::BelowFloor {
            n: n as i64,
            floor: hm as i64,
        });
    }
    Ok(restricted_ih(h, s, n)?.iter().all(|pi| {
        let k = pi.at(hm);
        let tail = &pi.word()[hm..];
        let complement: Vec<usize> = (k + 1..=n).filter(|v| !tail.contains(v)).collect();
        pi.length() == pi.flatten(hm).length() + subset_length(&complement, k + 1, n)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureViolation {
    pub h: HSequence,
    pub s: PairSet,
    pub b_q: Vec<QPoly>,
    pub witness: QLogConcavityViolation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetTiming {
    pub h: HSequence,
    pub s: PairSet,
    pub micros: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub checked: usize,
    pub violations: Vec<ConjectureViolation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<SetTiming>,
    pub elapsed_ms: u64,
}

impl ConjectureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `h` with every value capped at `cap`, as seen by pairs inside `[cap]`.
fn truncate(h: &HSequence, cap: usize) -> Vec<usize> {
    (1..cap).map(|i| h.at(i).min(cap)).collect()
}

fn check_set(h: &HSequence, s: &PairSet) -> Result<(Option<ConjectureViolation>, SetTiming)> {
    let start = Instant::now();
    let ge = b_q_coefficients(h, s)?;
    let violation = strong_q_log_concavity_violation(&ge.b_q).map(|witness| ConjectureViolation {
        h: h.clone(),
        s: s.clone(),
        b_q: ge.b_q,
        witness,
    });
    let timing = SetTiming {
        h: h.clone(),
        s: s.clone(),
        micros: start.elapsed().as_micros() as u64,
    };
    Ok((violation, timing))
}

fn run_checks(cases: Vec<(HSequence, PairSet)>, start: Instant) -> Result<ConjectureReport> {
    let results: Vec<_> = cases
        .par_iter()
        .map(|(h, s)| check_set(h, s))
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    let mut timings = Vec::with_capacity(results.len());
    for (v, t) in results {
        violations.extend(v);
        timings.push(t);
    }
    Ok(ConjectureReport {
        checked: timings.len(),
        violations,
        timings,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Nonempty admissible `S` with `h(m(S)) <= cap`, keyed by the part of `h`
/// that `I_h(S, h(m))` depends on.
fn admissible_upto(
    h: &HSequence,
    cap: usize,
    limits: &Limits,
    into: &mut BTreeMap<(Vec<usize>, PairSet), HSequence>,
) -> Result<()> {
    for s in enumerate_admissible(h, cap, limits)?.into_keys() {
        if s.is_empty() {
            continue;
        }
        let hm = h.at(s.m_of()?);
        if hm <= cap {
            into.entry((truncate(h, hm), s))
                .or_insert_with(|| h.clone());
        }
    }
    Ok(())
}

/// Strong q-log-concavity of `(b_k(S; q))_k` for every nonempty admissible
/// `S` with `h(m(S)) <= cap`. Each `S` is checked once, at `n = h(m)`.
pub fn verify_conjecture(h: &HSequence, cap: usize, limits: &Limits) -> Result<ConjectureReport> {
    limits.check(cap)?;
    let start = Instant::now();
    let mut cases = BTreeMap::new();
    admissible_upto(h, cap, limits, &mut cases)?;
    run_checks(cases.into_iter().map(|((_, s), h)| (h, s)).collect(), start)
}

/// Weakly increasing `h(1..n-1)` with `i < h(i) <= n`, extended by
/// `h(i) = i + 1` past `n - 1`.
pub fn hessenberg_functions(n: usize) -> Vec<HSequence> {
    fn grow(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<HSequence>) {
        let i = prefix.len() + 1;
        if i == n {
            out.push(HSequence::new(prefix.clone(), 1).expect("valid by construction"));
            return;
        }
        let lo = prefix.last().copied().unwrap_or(0).max(i + 1);
        for v in lo..=n {
            prefix.push(v);
            grow(n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(n.max(1), &mut Vec::new(), &mut out);
    out
}

/// The same check over every `h`. Only `min(h(i), h(m))` for `i < h(m)`
/// enters `b_k(S; q)`, so the Hessenberg functions on `[cap]` cover all `h`.
pub fn verify_conjecture_all(cap: usize, limits: &Limits) -> Result<ConjectureReport> {
    limits.check(cap)?;
    let start = Instant::now();
    let mut cases = BTreeMap::new();
    for h in hessenberg_functions(cap) {
        admissible_upto(&h, cap, limits, &mut cases)?;
    }
    run_checks(cases.into_iter().map(|((_, s), h)| (h, s)).collect(), start)
}
