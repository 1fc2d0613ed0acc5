//! Typed command results. Each one serializes to the JSON the command emits
//! and parses back from it unchanged.

use std::fmt::Write;

use invpoly::graded::{ConjectureReport, GradedExpansion};
use invpoly::poly::{json, q_binom, BinomialTerm};
use invpoly::poset::b_from_heights;
use invpoly::sweep::{CheckKind, HeightReport, SweepReport};
use invpoly::{
    b_q_coefficients, build_poset, degree_of, enumerate_admissible, enumerate_ih, expansion,
    graded_expansion_eval, inv_h, is_constant, poincare as poincare_poly, Basis, Error, HSequence,
    IntSequence, Limits, MonomialPoly, PairSet, Permutation, Poset, QPoly,
};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::golden::GoldenReport;
use crate::{EXIT_OK, EXIT_VERIFY_FAILED};

pub trait Report: Serialize {
    fn human(&self) -> String;

    fn exit_code(&self) -> i32 {
        EXIT_OK
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalLine {
    pub basis: Basis,
    #[serde(with = "json::big")]
    pub value: BigInt,
    pub validity_floor: i64,
    pub below_floor: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub h: HSequence,
    #[serde(rename = "S")]
    pub s: PairSet,
    pub n: usize,
    pub brute_force: Option<u64>,
    pub expansions: Vec<EvalLine>,
    pub consistent: bool,
}

pub fn eval(h: &HSequence, s: &PairSet, n: usize, limits: &Limits) -> Result<EvalOutput, Error> {
    let mut expansions = Vec::new();
    for basis in [Basis::Fiber, Basis::B, Basis::A] {
        let e = expansion(h, s, basis)?;
        expansions.push(EvalLine {
            basis,
            value: e.eval_raw(n as i64),
            validity_floor: e.validity_floor,
            below_floor: (n as i64) < e.validity_floor,
        });
    }
    let brute_force = if limits.check(n).is_ok() {
        Some(enumerate_ih(h, s, n, limits)?.len() as u64)
    } else {
        None
    };
    let valid: Vec<&BigInt> = expansions
        .iter()
        .filter(|l| !l.below_floor)
        .map(|l| &l.value)
        .collect();
    let reference = brute_force
        .map(BigInt::from)
        .or_else(|| valid.first().map(|v| (*v).clone()));
    let consistent = reference.is_none_or(|r| valid.iter().all(|v| **v == r));
    Ok(EvalOutput {
        h: h.clone(),
        s: s.clone(),
        n,
        brute_force,
        expansions,
        consistent,
    })
}

impl Report for EvalOutput {
    fn human(&self) -> String {
        let mut out = format!("I_h(S; {}) for h = {}, S = {}\n", self.n, self.h, self.s);
        match self.brute_force {
            Some(c) => writeln!(out, "  brute force  {c}").unwrap(),
            None => writeln!(out, "  brute force  skipped (n above bound)").unwrap(),
        }
        for l in &self.expansions {
            let note = if l.below_floor {
                format!("  (below validity floor {})", l.validity_floor)
            } else {
                String::new()
            };
            writeln!(
                out,
                "  {:<11}  {}{note}",
                format!("{} basis", l.basis),
                l.value
            )
            .unwrap();
        }
        if !self.consistent {
            out.push_str("  MISMATCH\n");
        }
        out
    }

    fn exit_code(&self) -> i32 {
        if self.consistent {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandOutput {
    pub basis: Basis,
    pub coeffs: IntSequence,
    pub binomial_terms: Vec<BinomialTerm>,
    pub monomial: MonomialPoly,
    pub validity_floor: i64,
}

pub fn expand(h: &HSequence, s: &PairSet, basis: Basis) -> Result<ExpandOutput, Error> {
    let e = expansion(h, s, basis)?;
    Ok(ExpandOutput {
        basis,
        monomial: e.to_monomial(),
        binomial_terms: e.poly.terms().to_vec(),
        coeffs: e.coeffs,
        validity_floor: e.validity_floor,
    })
}

fn seq_text(s: &IntSequence) -> String {
    let body: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
    format!("({}) from index {}", body.join(", "), s.origin)
}

impl Report for ExpandOutput {
    fn human(&self) -> String {
        let poly = invpoly::BinomialPoly::from_terms(self.binomial_terms.clone());
        format!(
            "{} basis: {poly}\n  = {}\n  coefficients {}\n  valid for n >= {}\n",
            self.basis,
            self.monomial,
            seq_text(&self.coeffs),
            self.validity_floor
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedEval {
    pub n: usize,
    pub poly: QPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedOutput {
    #[serde(flatten)]
    pub expansion: GradedExpansion,
    pub evaluations: Vec<GradedEval>,
}

pub fn graded(h: &HSequence, s: &PairSet, at: &[usize]) -> Result<GradedOutput, Error> {
    let expansion = b_q_coefficients(h, s)?;
    let evaluations = at
        .iter()
        .map(|&n| {
            Ok(GradedEval {
                n,
                poly: graded_expansion_eval(&expansion, n)?,
            })
        })
        .collect::<Result<_, Error>>()?;
    Ok(GradedOutput {
        expansion,
        evaluations,
    })
}

impl Report for GradedOutput {
    fn human(&self) -> String {
        let ge = &self.expansion;
        let mut out = format!("h(m) = {}, m = {}\n", ge.hm, ge.m);
        for (i, b) in ge.b_q.iter().enumerate() {
            writeln!(out, "  b_{}(q) = {b}", ge.lowest_k() + i).unwrap();
        }
        for e in &self.evaluations {
            writeln!(out, "  I_h(S, {}; q) = {}", e.n, e.poly).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Heights {
    pub v: usize,
    pub heights: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetOutput {
    pub poset: Poset,
    pub linear_extensions: Vec<Permutation>,
    pub heights: Vec<Heights>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<IntSequence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<bool>,
}

fn heights_of(p: &Poset, vs: &[usize]) -> Result<Vec<Heights>, Error> {
    vs.iter()
        .map(|&v| {
            let seq = p.height_sequence(v)?;
            Ok(Heights {
                v,
                heights: seq
                    .values
                    .iter()
                    .map(|x| u64::try_from(x).expect("counts are nonnegative"))
                    .collect(),
            })
        })
        .collect()
}

/// A poset given directly; heights for `v`, or for every element.
pub fn poset_of(p: Poset, v: Option<usize>) -> Result<PosetOutput, Error> {
    let vs: Vec<usize> = match v {
        Some(v) => vec![v],
        None => (1..=p.size()).collect(),
    };
    Ok(PosetOutput {
        heights: heights_of(&p, &vs)?,
        linear_extensions: p.linear_extensions(),
        poset: p,
        b: None,
        d_s: None,
        degree: None,
        constant: None,
    })
}

/// The poset attached to `S`; heights for `v`, by default `h(m)`.
pub fn poset_of_set(h: &HSequence, s: &PairSet, v: Option<usize>) -> Result<PosetOutput, Error> {
    let p = build_poset(h, s)?;
    let hm = h.at(s.m_of()?);
    let degree = degree_of(h, s)?;
    Ok(PosetOutput {
        heights: heights_of(&p, &[v.unwrap_or(hm)])?,
        linear_extensions: p.linear_extensions(),
        poset: p,
        b: Some(b_from_heights(h, s)?),
        d_s: Some(hm - degree),
        degree: Some(degree),
        constant: Some(is_constant(h, s)?),
    })
}

impl Report for PosetOutput {
    fn human(&self) -> String {
        let covers: Vec<String> = self
            .poset
            .covers()
            .iter()
            .map(|(a, b)| format!("{a}<{b}"))
            .collect();
        let mut out = format!(
            "poset on [{}], covers {}\n",
            self.poset.size(),
            covers.join(" ")
        );
        let ext: Vec<String> = self
            .linear_extensions
            .iter()
            .map(|p| p.to_string())
            .collect();
        writeln!(out, "  {} linear extensions: {}", ext.len(), ext.join(" ")).unwrap();
        for hs in &self.heights {
            let body: Vec<String> = hs.heights.iter().map(|x| x.to_string()).collect();
            writeln!(out, "  heights of {}: ({})", hs.v, body.join(", ")).unwrap();
        }
        if let Some(b) = &self.b {
            writeln!(out, "  b = {}", seq_text(b)).unwrap();
        }
        if let (Some(d), Some(deg), Some(c)) = (self.d_s, self.degree, self.constant) {
            writeln!(out, "  d_S = {d}, degree {deg}, constant {c}").unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Class {
    #[serde(rename = "S")]
    pub s: PairSet,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleOutput {
    pub h: HSequence,
    pub n: usize,
    pub classes: Vec<Class>,
}

pub fn admissible(h: &HSequence, n: usize, limits: &Limits) -> Result<AdmissibleOutput, Error> {
    Ok(AdmissibleOutput {
        h: h.clone(),
        n,
        classes: enumerate_admissible(h, n, limits)?
            .into_iter()
            .map(|(s, count)| Class { s, count })
            .collect(),
    })
}

impl Report for AdmissibleOutput {
    fn human(&self) -> String {
        let mut out = format!(
            "{} admissible sets for h = {} in S_{}\n",
            self.classes.len(),
            self.h,
            self.n
        );
        for c in &self.classes {
            writeln!(out, "  {:>8}  {}", c.count, c.s).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareOutput {
    pub h: HSequence,
    pub n: usize,
    #[serde(flatten)]
    pub poly: QPoly,
}

pub fn poincare(h: &HSequence, n: usize, limits: &Limits) -> Result<PoincareOutput, Error> {
    Ok(PoincareOutput {
        h: h.clone(),
        n,
        poly: poincare_poly(h, n, limits)?,
    })
}

impl Report for PoincareOutput {
    fn human(&self) -> String {
        format!("{}\n", self.poly.to_string().replace('q', "t"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateOutput {
    pub h: HSequence,
    #[serde(rename = "S")]
    pub s: PairSet,
    pub n: usize,
    pub perms: Vec<Permutation>,
    /// `sum q^len(pi)` over `perms`
    pub lengths: QPoly,
}

pub fn enumerate(
    h: &HSequence,
    s: &PairSet,
    n: usize,
    limits: &Limits,
) -> Result<EnumerateOutput, Error> {
    let perms = enumerate_ih(h, s, n, limits)?;
    let mut lengths = QPoly::zero();
    for p in &perms {
        lengths.add_term(p.length(), &BigInt::from(1));
    }
    Ok(EnumerateOutput {
        h: h.clone(),
        s: s.clone(),
        n,
        perms,
        lengths,
    })
}

impl Report for EnumerateOutput {
    fn human(&self) -> String {
        let mut out = format!(
            "{} permutations, lengths {}\n",
            self.perms.len(),
            self.lengths
        );
        for p in &self.perms {
            writeln!(out, "  {p}").unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvOutput {
    pub h: HSequence,
    pub perm: Permutation,
    pub length: usize,
    pub inversions: PairSet,
    pub h_inversions: PairSet,
}

pub fn inversions(h: &HSequence, perm: &Permutation) -> InvOutput {
    InvOutput {
        h: h.clone(),
        perm: perm.clone(),
        length: perm.length(),
        inversions: inv_h(&HSequence::full(perm.len()), perm),
        h_inversions: inv_h(h, perm),
    }
}

impl Report for InvOutput {
    fn human(&self) -> String {
        format!(
            "{}: length {}\n  inv   {}\n  inv_h {}\n",
            self.perm, self.length, self.inversions, self.h_inversions
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QBinomOutput {
    pub n: usize,
    pub k: i64,
    #[serde(flatten)]
    pub poly: QPoly,
}

pub fn qbinom(n: usize, k: i64) -> QBinomOutput {
    QBinomOutput {
        n,
        k,
        poly: q_binom(n, k),
    }
}

impl Report for QBinomOutput {
    fn human(&self) -> String {
        format!("{}\n", self.poly)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub sweeps: Vec<SweepReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heights: Option<HeightReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden: Option<GoldenReport>,
    pub passed: bool,
}

impl VerifyOutput {
    pub fn new(
        sweeps: Vec<SweepReport>,
        heights: Option<HeightReport>,
        golden: Option<GoldenReport>,
    ) -> Self {
        let passed = sweeps.iter().all(SweepReport::passed)
            && heights.as_ref().is_none_or(|r| r.failures.is_empty())
            && golden.as_ref().is_none_or(|g| g.failures.is_empty());
        VerifyOutput {
            sweeps,
            heights,
            golden,
            passed,
        }
    }
}

fn check_name(kind: CheckKind) -> &'static str {
    match kind {
        CheckKind::Expansions => "expansions vs brute force",
        CheckKind::LogConcavity => "log-concavity",
        CheckKind::Conversion => "b to a conversion",
        CheckKind::Heights => "heights and extensions",
        CheckKind::Graded => "graded expansion",
        CheckKind::LengthSplit => "length split",
        CheckKind::Degree => "degree and constancy",
    }
}

fn status(failures: &[String], out: &mut String, label: &str, cases: usize) {
    if failures.is_empty() {
        writeln!(out, "  {label:<26} ok ({cases})").unwrap();
    } else {
        writeln!(out, "  {label:<26} FAIL ({} of {cases})", failures.len()).unwrap();
        for f in failures.iter().take(5) {
            writeln!(out, "      {f}").unwrap();
        }
    }
}

impl Report for VerifyOutput {
    fn human(&self) -> String {
        let mut out = String::new();
        for r in &self.sweeps {
            writeln!(out, "h = {}: {} admissible sets", r.h, r.sets).unwrap();
            for c in &r.checks {
                status(&c.failures, &mut out, check_name(c.kind), c.cases);
            }
            if let Some(c) = &r.conjecture {
                let msgs: Vec<String> = c
                    .violations
                    .iter()
                    .map(|v| format!("{} {}: {:?}", v.h, v.s, v.witness))
                    .collect();
                status(&msgs, &mut out, "strong q-log-concavity", c.checked);
            }
        }
        if let Some(hr) = &self.heights {
            writeln!(out, "random posets (seed {}):", hr.seed).unwrap();
            status(&hr.failures, &mut out, "height sequences", hr.posets);
        }
        if let Some(g) = &self.golden {
            writeln!(out, "golden fixtures:").unwrap();
            status(&g.failures, &mut out, "replayed cases", g.cases);
        }
        out.push_str(if self.passed { "passed\n" } else { "FAILED\n" });
        out
    }

    fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        }
    }
}

impl Report for ConjectureReport {
    fn human(&self) -> String {
        let mut out = format!(
            "checked {} sets in {} ms, {} violations\n",
            self.checked,
            self.elapsed_ms,
            self.violations.len()
        );
        for v in &self.violations {
            let b: Vec<String> = v.b_q.iter().map(|p| p.to_string()).collect();
            writeln!(
                out,
                "  h = {}, S = {}: (i, j) = ({}, {}), coefficient {} of q^{}\n    b = [{}]",
                v.h,
                v.s,
                v.witness.i,
                v.witness.j,
                v.witness.coefficient,
                v.witness.exponent,
                b.join("; ")
            )
            .unwrap();
        }
        out
    }

    fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        }
    }
}
