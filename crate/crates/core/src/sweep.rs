//! The invariant suite run by `invpoly verify`: every nonempty admissible
//! `S` with `j(S) <= max_j` is pushed through all expansions, the poset
//! bridge and the graded expansion, and compared against brute force over
//! `S_n` for `n <= max_n`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::{
    enumerate_admissible, enumerate_admissible_graded, restricted_ih, Limits,
};
use crate::error::{Error, Result};
use crate::expansions::{
    a_expansion, a_from_b, b_expansion, degree_of, fiber_expansion, is_constant,
};
use crate::graded::{
    b_q_coefficients, graded_expansion_eval, length_split_check, verify_conjecture,
    ConjectureReport,
};
use crate::model::{HSequence, PairSet, Permutation};
use crate::poly::QPoly;
use crate::poset::{
    b_from_heights, build_poset, d_s_by_chains, d_s_of, is_constant_by_poset, random_poset,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// fiber, b and a expansions agree and match brute-force counts
    Expansions,
    /// `(b_k)` and `(a_k)` are log-concave without internal zeros, and PF2
    /// agrees with that
    LogConcavity,
    /// `a_from_b` reproduces the a-expansion
    Conversion,
    /// `b_k` from height sequences; extensions are the inverses of `I_h(S, h(m))`
    Heights,
    /// graded expansion matches the brute-force length generating function
    Graded,
    /// length decomposition over `I_h(S, n)` for `h(m) <= n <= max_n`
    LengthSplit,
    /// degree, constancy and `d_S` computed two ways each
    Degree,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::Expansions,
        CheckKind::LogConcavity,
        CheckKind::Conversion,
        CheckKind::Heights,
        CheckKind::Graded,
        CheckKind::LengthSplit,
        CheckKind::Degree,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub kind: CheckKind,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub max_j: usize,
    pub max_n: usize,
    pub conjecture_cap: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_j: 6,
            max_n: 7,
            conjecture_cap: Some(6),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub h: HSequence,
    pub sets: usize,
    pub checks: Vec<CheckResult>,
    pub conjecture: Option<ConjectureReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
            && self.conjecture.as_ref().is_none_or(|c| c.passed())
    }

    pub fn check(&self, kind: CheckKind) -> &CheckResult {
        self.checks
            .iter()
            .find(|c| c.kind == kind)
            .expect("every kind is reported")
    }
}

/// Nonempty admissible sets with `j(S) <= max_j`, sorted.
pub fn corpus(h: &HSequence, max_j: usize, limits: &Limits) -> Result<Vec<PairSet>> {
    Ok(enumerate_admissible(h, max_j, limits)?
        .into_keys()
        .filter(|s| !s.is_empty())
        .collect())
}

/// Brute-force length generating functions of every class, for `n` in `1..=max_n`.
pub struct BruteForce {
    by_n: Vec<BTreeMap<PairSet, QPoly>>,
}

impl BruteForce {
    pub fn new(h: &HSequence, max_n: usize, limits: &Limits) -> Result<Self> {
        let by_n = (0..=max_n)
            .map(|n| {
                if n == 0 {
                    Ok(BTreeMap::new())
                } else {
                    enumerate_admissible_graded(h, n, limits)
                }
            })
            .collect::<Result<_>>()?;
        Ok(BruteForce { by_n })
    }

    pub fn max_n(&self) -> usize {
        self.by_n.len() - 1
    }

    pub fn graded(&self, s: &PairSet, n: usize) -> QPoly {
        self.by_n[n].get(s).cloned().unwrap_or_default()
    }

    pub fn count(&self, s: &PairSet, n: usize) -> BigInt {
        self.graded(s, n).eval_at_one()
    }
}

type Failures = Vec<(CheckKind, String)>;

fn fail(out: &mut Failures, kind: CheckKind, msg: String) {
    out.push((kind, msg));
}

/// Runs every check on a single `S`, returning the failures found.
pub fn check_set(
    h: &HSequence,
    s: &PairSet,
    brute: &BruteForce,
    limits: &Limits,
) -> Result<Vec<(CheckKind, String)>> {
    use CheckKind::*;
    let mut out = Vec::new();
    let max_n = brute.max_n();
    let j = s.j_of().expect("nonempty");
    let m = s.m_of()?;
    let hm = h.at(m);

    let fiber = fiber_expansion(h, s)?;
    let b = b_expansion(h, s)?;
    let a = a_expansion(h, s)?;
    let mono = b.to_monomial();
    if fiber.to_monomial() != mono || a.to_monomial() != mono {
        fail(
            &mut out,
            Expansions,
            format!("fiber {} / b {} / a {}", fiber.poly, b.poly, a.poly),
        );
    }
    for n in j..=max_n {
        let want = brute.count(s, n);
        for e in [&fiber, &b, &a] {
            let got = e.eval_raw(n as i64);
            if got != want {
                fail(
                    &mut out,
                    Expansions,
                    format!("{} basis at n={n}: {got} != {want}", e.basis),
                );
            }
        }
    }

    for (name, seq) in [("b", &b.coeffs), ("a", &a.coeffs)] {
        let lc = seq.is_log_concave();
        let nz = seq.has_no_internal_zeros();
        if !lc || !nz {
            fail(
                &mut out,
                LogConcavity,
                format!(
                    "{name} = {:?} log-concave {lc}, contiguous {nz}",
                    seq.values
                ),
            );
        }
        if seq.is_pf2()? != (lc && nz) {
            fail(
                &mut out,
                LogConcavity,
                format!("{name}: PF2 disagrees with log-concavity"),
            );
        }
    }

    match a_from_b(&b.coeffs, m, hm) {
        Ok(conv) if conv == a.coeffs => {}
        other => fail(
            &mut out,
            Conversion,
            format!("a_from_b gave {other:?}, a-expansion {:?}", a.coeffs.values),
        ),
    }

    let heights = b_from_heights(h, s)?;
    if heights != b.coeffs {
        fail(
            &mut out,
            Heights,
            format!("heights {:?} != b {:?}", heights.values, b.coeffs.values),
        );
    }
    let extensions: BTreeSet<Permutation> =
        build_poset(h, s)?.linear_extensions().into_iter().collect();
    let inverses: BTreeSet<Permutation> = restricted_ih(h, s, hm)?
        .iter()
        .map(Permutation::inverse)
        .collect();
    if extensions != inverses {
        fail(
            &mut out,
            Heights,
            format!(
                "{} extensions vs {} inverses",
                extensions.len(),
                inverses.len()
            ),
        );
    }

    let ge = b_q_coefficients(h, s)?;
    for (i, bq) in ge.b_q.iter().enumerate() {
        let k = ge.lowest_k() + i;
        if bq.eval_at_one() != b.coeffs.get(k as i64) || !bq.is_nonnegative() {
            fail(
                &mut out,
                Graded,
                format!("b_{k}(q) = {bq} does not specialize to b_{k}"),
            );
        }
    }
    for n in hm..=max_n {
        let got = graded_expansion_eval(&ge, n)?;
        let want = brute.graded(s, n);
        if got != want {
            fail(&mut out, Graded, format!("n={n}: {got} != {want}"));
        }
        if got.eval_at_one() != b.eval_raw(n as i64) {
            fail(
                &mut out,
                Graded,
                format!("n={n}: q=1 value differs from ungraded"),
            );
        }
        if !length_split_check(h, s, n, limits)? {
            fail(&mut out, LengthSplit, format!("n={n}"));
        }
    }

    let degree = degree_of(h, s)?;
    let mono_degree = mono.degree().unwrap_or(0);
    if degree != mono_degree {
        fail(
            &mut out,
            Degree,
            format!("degree_of {degree}, polynomial degree {mono_degree}"),
        );
    }
    let constant = is_constant(h, s)?;
    if constant != (degree == 0) || constant != is_constant_by_poset(h, s)? {
        fail(
            &mut out,
            Degree,
            format!("constancy criteria disagree (degree {degree})"),
        );
    }
    let (d1, d2) = (d_s_of(h, s)?, d_s_by_chains(h, s)?);
    if d1 != d2 {
        fail(
            &mut out,
            Degree,
            format!("d_S by poset {d1}, by chains {d2}"),
        );
    }
    Ok(out)
}

/// Runs the full suite for `h`.
pub fn run_sweep(h: &HSequence, config: &SweepConfig, limits: &Limits) -> Result<SweepReport> {
    if config.max_j > config.max_n {
        return Err(Error::BoundExceeded {
            n: config.max_j,
            max: config.max_n,
        });
    }
    let sets = corpus(h, config.max_j, limits)?;
    let brute = BruteForce::new(h, config.max_n, limits)?;
    let per_set: Vec<Vec<(CheckKind, String)>> = sets
        .par_iter()
        .map(|s| {
            check_set(h, s, &brute, limits).map(|fs| {
                fs.into_iter()
                    .map(|(k, msg)| (k, format!("{h} {s}: {msg}")))
                    .collect()
            })
        })
        .collect::<Result<_>>()?;
    let mut checks: Vec<CheckResult> = CheckKind::ALL
        .iter()
        .map(|&kind| CheckResult {
            kind,
            cases: sets.len(),
            failures: Vec::new(),
        })
        .collect();
    for (kind, msg) in per_set.into_iter().flatten() {
        checks[kind as usize].failures.push(msg);
    }
    let conjecture = config
        .conjecture_cap
        .map(|cap| verify_conjecture(h, cap, limits))
        .transpose()?;
    Ok(SweepReport {
        h: h.clone(),
        sets: sets.len(),
        checks,
        conjecture,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightReport {
    pub seed: u64,
    pub posets: usize,
    pub failures: Vec<String>,
}

/// Height sequences of every element of `count` random posets with at most
/// `max_size` elements: log-concave, and nonzero exactly on the range given
/// by the down- and up-set sizes.
pub fn random_height_check(seed: u64, count: usize, max_size: usize) -> Result<HeightReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..count {
        let size = rng.gen_range(1..=max_size.max(1));
        let den = rng.gen_range(2..=6);
        let p = random_poset(&mut rng, size, 1, den);
        for v in 1..=size {
            let hs = p.height_sequence(v)?;
            let (lo, hi) = p.height_support_bounds(v)?;
            let support = hs.support().map(|(a, b)| (a as usize, b as usize));
            if !hs.is_log_concave() || !hs.has_no_internal_zeros() || support != Some((lo, hi)) {
                failures.push(format!(
                    "{}: v={v} heights {:?}",
                    serde_json::to_string(&p).expect("posets serialize"),
                    hs.values
                ));
            }
        }
    }
    Ok(HeightReport {
        seed,
        posets: count,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        let lim = Limits::default();
        let config = SweepConfig {
            max_j: 5,
            max_n: 6,
            conjecture_cap: Some(5),
        };
        for h in [
            HSequence::tail(1),
            HSequence::tail(2),
            HSequence::new(vec![2, 4, 4, 5], 1).unwrap(),
        ] {
            let report = run_sweep(&h, &config, &lim).unwrap();
            assert!(report.sets > 0);
            for c in &report.checks {
                assert!(c.failures.is_empty(), "{:?}: {:?}", c.kind, c.failures);
            }
            assert!(report.passed());
        }
    }

    #[test]
    fn random_heights_pass() {
        let r = random_height_check(11, 40, 6).unwrap();
        assert_eq!(r.posets, 40);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn corpus_of_descents() {
        let lim = Limits::default();
        // nonempty subsets of {1, 2, 3} as descent sets
        assert_eq!(corpus(&HSequence::tail(1), 4, &lim).unwrap().len(), 7);
    }

    #[test]
    fn window_larger_than_bound_is_rejected() {
        let config = SweepConfig {
            max_j: 6,
            max_n: 5,
            conjecture_cap: None,
        };
        assert!(run_sweep(&HSequence::tail(1), &config, &Limits::default()).is_err());
    }
}
