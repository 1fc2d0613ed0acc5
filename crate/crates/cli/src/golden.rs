//! Golden fixtures: each file lists invocations with the exit code and the
//! JSON fields they must produce. Fields absent from `expect` are not checked.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FIXTURES: &[(&str, &str)] = &[
    (
        "inversion-sets",
        include_str!("../fixtures/inversion-sets.json"),
    ),
    (
        "constant-polynomial",
        include_str!("../fixtures/constant-polynomial.json"),
    ),
    (
        "fiber-single-term",
        include_str!("../fixtures/fiber-single-term.json"),
    ),
    (
        "fiber-two-terms",
        include_str!("../fixtures/fiber-two-terms.json"),
    ),
    ("b-expansion", include_str!("../fixtures/b-expansion.json")),
    ("a-expansion", include_str!("../fixtures/a-expansion.json")),
    (
        "height-sequences",
        include_str!("../fixtures/height-sequences.json"),
    ),
    (
        "attached-poset",
        include_str!("../fixtures/attached-poset.json"),
    ),
    (
        "nonconstant-values",
        include_str!("../fixtures/nonconstant-values.json"),
    ),
    (
        "seven-pair-set",
        include_str!("../fixtures/seven-pair-set.json"),
    ),
    ("q-binomial", include_str!("../fixtures/q-binomial.json")),
    (
        "graded-values",
        include_str!("../fixtures/graded-values.json"),
    ),
    (
        "admissible-partition",
        include_str!("../fixtures/admissible-partition.json"),
    ),
    ("poincare", include_str!("../fixtures/poincare.json")),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub description: String,
    pub cases: Vec<Case>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub args: Vec<String>,
    #[serde(default)]
    pub exit: i32,
    #[serde(default)]
    pub expect: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenReport {
    pub fixtures: usize,
    pub cases: usize,
    pub failures: Vec<String>,
}

/// `actual` agrees with `expect` on every object key `expect` mentions;
/// arrays and scalars must match exactly.
pub fn matches(expect: &Value, actual: &Value) -> bool {
    match (expect, actual) {
        (Value::Object(e), Value::Object(a)) => e
            .iter()
            .all(|(k, v)| a.get(k).is_some_and(|av| matches(v, av))),
        (Value::Array(e), Value::Array(a)) => {
            e.len() == a.len() && e.iter().zip(a).all(|(x, y)| matches(x, y))
        }
        (e, a) => e == a,
    }
}

/// Runs one case with `--json` and returns a description of any mismatch.
pub fn replay_case(case: &Case) -> Option<String> {
    let args = std::iter::once("invpoly".to_string())
        .chain(case.args.iter().cloned())
        .chain(std::iter::once("--json".to_string()));
    let out = crate::run(args);
    if out.code != case.exit {
        return Some(format!(
            "{:?}: exit {} (expected {}) {}",
            case.args,
            out.code,
            case.exit,
            out.stderr.trim()
        ));
    }
    if case.expect.is_null() {
        return None;
    }
    match serde_json::from_str::<Value>(&out.stdout) {
        Ok(actual) if matches(&case.expect, &actual) => None,
        Ok(actual) => Some(format!("{:?}: got {actual}", case.args)),
        Err(e) => Some(format!("{:?}: output is not JSON: {e}", case.args)),
    }
}

pub fn replay() -> GoldenReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for (name, text) in FIXTURES {
        let fixture: Fixture = match serde_json::from_str(text) {
            Ok(f) => f,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        for case in &fixture.cases {
            cases += 1;
            if let Some(msg) = replay_case(case) {
                failures.push(format!("{name}: {msg}"));
            }
        }
    }
    GoldenReport {
        fixtures: FIXTURES.len(),
        cases,
        failures,
    }
}
