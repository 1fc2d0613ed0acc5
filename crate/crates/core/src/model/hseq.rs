use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly increasing sequence `h` with `h(i) > i` for every `i >= 1`.
///
/// Only finitely many values are stored: `h(i) = prefix[i-1]` for
/// `i <= prefix.len()` and `h(i) = i + tail_offset` beyond that.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawHSequence", into = "RawHSequence")]
pub struct HSequence {
    prefix: Vec<usize>,
    tail_offset: usize,
}

#[derive(Serialize, Deserialize)]
struct RawHSequence {
    #[serde(default)]
    prefix: Vec<usize>,
    tail_offset: usize,
}

impl TryFrom<RawHSequence> for HSequence {
    type Error = Error;

    fn try_from(raw: RawHSequence) -> Result<Self> {
        HSequence::new(raw.prefix, raw.tail_offset)
    }
}

impl From<HSequence> for RawHSequence {
    fn from(h: HSequence) -> Self {
        RawHSequence {
            prefix: h.prefix,
            tail_offset: h.tail_offset,
        }
    }
}

impl HSequence {
    pub fn new(prefix: Vec<usize>, tail_offset: usize) -> Result<Self> {
        if tail_offset == 0 {
            return Err(Error::InvalidHSequence(
                "tail offset must be positive so that h(i) > i".into(),
            ));
        }
        for (idx, &v) in prefix.iter().enumerate() {
            let i = idx + 1;
            if v <= i {
                return Err(Error::InvalidHSequence(format!(
                    "h({i}) = {v} must exceed {i}"
                )));
            }
            if idx > 0 && prefix[idx - 1] > v {
                return Err(Error::InvalidHSequence(format!(
                    "h({}) = {} > h({i}) = {v}; sequence must be weakly increasing",
                    i - 1,
                    prefix[idx - 1]
                )));
            }
        }
        if let Some(&last) = prefix.last() {
            let seam = prefix.len() + 1 + tail_offset;
            if last > seam {
                return Err(Error::InvalidHSequence(format!(
                    "h({}) = {last} exceeds the first tail value h({}) = {seam}",
                    prefix.len(),
                    prefix.len() + 1
                )));
            }
        }
        Ok(HSequence {
            prefix,
            tail_offset,
        })
    }

    /// The affine sequence `h(i) = i + t`. Panics if `t == 0`.
    pub fn tail(t: usize) -> Self {
        HSequence::new(Vec::new(), t).expect("tail offset must be positive")
    }

    /// An `h` with `h(i) >= n` for all `i < n`, under which every inversion of
    /// a permutation of `[n]` is an h-inversion.
    pub fn full(n: usize) -> Self {
        HSequence::tail(n.max(1))
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn tail_offset(&self) -> usize {
        self.tail_offset
    }

    /// `h(i)` for `i >= 1`.
    pub fn at(&self, i: usize) -> usize {
        debug_assert!(i >= 1, "h is indexed from 1");
        match self.prefix.get(i.wrapping_sub(1)) {
            Some(&v) => v,
            None => i + self.tail_offset,
        }
    }
}

impl fmt::Display for HSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for v in &self.prefix {
            write!(f, "{v},")?;
        }
        let l = self.prefix.len();
        write!(
            f,
            "{},{},...)",
            l + 1 + self.tail_offset,
            l + 2 + self.tail_offset
        )
    }
}
