//! Parsing of h-sequences, pair sets and problem files from the command line.

use std::collections::BTreeMap;
use std::path::Path;

use invpoly::{Error, HSequence, PairSet, Permutation, Poset};
use serde::{Deserialize, Serialize};

/// A problem read from a JSON file: `{"h": ..., "S": ..., "n": ..., "options": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub h: HSequence,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<PairSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<String, String>,
}

impl ProblemSpec {
    pub fn load(path: &Path) -> Result<ProblemSpec, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    }
}

fn parse_error(msg: &str) -> Error {
    Error::InvalidHSequence(msg.to_string())
}

/// Accepts the JSON form, `+T` for `h(i) = i + T`, or `a,b,c+T` for an
/// explicit prefix followed by the tail `i + T`.
pub fn parse_h(text: &str) -> Result<HSequence, Error> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).map_err(|e| parse_error(&format!("h: {e}")));
    }
    let (prefix, tail) = text
        .rsplit_once('+')
        .ok_or_else(|| parse_error(&format!("h: expected JSON or PREFIX+TAIL, got {text:?}")))?;
    let tail: usize = tail
        .trim()
        .parse()
        .map_err(|_| parse_error(&format!("h: bad tail offset {tail:?}")))?;
    let prefix = numbers(prefix).map_err(|e| parse_error(&format!("h: {e}")))?;
    HSequence::new(prefix, tail)
}

/// Reads every unsigned integer in `text`, ignoring any other characters.
fn numbers(text: &str) -> Result<Vec<usize>, String> {
    text.split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("number {t:?} out of range")))
        .collect()
}

/// Accepts `[[1,3],[2,3]]`, `{(1,3),(2,3)}` or `1-3 2-3`: integers are read
/// in order and paired up.
pub fn parse_s(text: &str) -> Result<PairSet, Error> {
    for (open, close) in [('[', ']'), ('(', ')'), ('{', '}')] {
        if text.matches(open).count() != text.matches(close).count() {
            return Err(Error::InvalidPairSet(format!(
                "unbalanced {open}{close} in {text:?}"
            )));
        }
    }
    let nums = numbers(text).map_err(Error::InvalidPairSet)?;
    if nums.len() % 2 != 0 {
        return Err(Error::InvalidPairSet(format!(
            "odd number of entries in {text:?}"
        )));
    }
    PairSet::new(nums.chunks(2).map(|c| (c[0], c[1])).collect())
}

pub fn parse_perm(text: &str) -> Result<Permutation, Error> {
    let text = text.trim();
    if text.starts_with('[') {
        return serde_json::from_str(text)
            .map_err(|e| Error::InvalidPermutation(format!("{text}: {e}")));
    }
    text.parse()
}

pub fn parse_poset(text: &str) -> Result<Poset, Error> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("poset: {e}")))
}
