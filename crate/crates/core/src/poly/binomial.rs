use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::json;

/// `n (n-1) ... (n-k+1) / k!`, defined for every integer `n`.
pub fn binom(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// One term `c * C(n - s, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialTerm {
    #[serde(with = "json::big")]
    pub c: BigInt,
    pub s: i64,
    pub d: u32,
}

/// A polynomial in `n` written as `sum c * C(n - s, d)`.
///
/// Terms are kept sorted by `(d, s)` with like terms merged and zero terms
/// dropped, so equal term lists mean equal representations (not necessarily
/// equal polynomials; compare [`BinomialPoly::to_monomial`] for that).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawBinomialPoly")]
pub struct BinomialPoly {
    terms: Vec<BinomialTerm>,
}

#[derive(Deserialize)]
struct RawBinomialPoly {
    terms: Vec<BinomialTerm>,
}

impl From<RawBinomialPoly> for BinomialPoly {
    fn from(raw: RawBinomialPoly) -> Self {
        BinomialPoly::from_terms(raw.terms)
    }
}

impl BinomialPoly {
    pub fn zero() -> Self {
        BinomialPoly::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        BinomialPoly::from_terms([BinomialTerm {
            c: c.into(),
            s: 0,
            d: 0,
        }])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = BinomialTerm>) -> Self {
        let mut merged: BTreeMap<(u32, i64), BigInt> = BTreeMap::new();
        for t in terms {
            // C(n - s, 0) = 1 regardless of the shift
            let s = if t.d == 0 { 0 } else { t.s };
            *merged.entry((t.d, s)).or_default() += t.c;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((d, s), c)| BinomialTerm { c, s, d })
            .collect();
        BinomialPoly { terms }
    }

    pub fn terms(&self) -> &[BinomialTerm] {
        &self.terms
    }

    /// Exact value at integer `n`, using the polynomial convention for
    /// binomials with arguments below `d`.
    pub fn eval(&self, n: i64) -> BigInt {
        self.terms.iter().map(|t| &t.c * binom(n - t.s, t.d)).sum()
    }

    pub fn to_monomial(&self) -> MonomialPoly {
        let mut acc: Vec<BigRational> = Vec::new();
        for t in &self.terms {
            // (n - s)(n - s - 1)...(n - s - d + 1) / d!
            let mut prod = vec![BigRational::one()];
            for i in 0..t.d as i64 {
                let root = BigRational::from_integer(BigInt::from(t.s + i));
                let mut next = vec![BigRational::zero(); prod.len() + 1];
                for (e, c) in prod.iter().enumerate() {
                    next[e + 1] += c;
                    next[e] -= c * &root;
                }
                prod = next;
            }
            let scale = BigRational::new(t.c.clone(), factorial(t.d));
            if acc.len() < prod.len() {
                acc.resize(prod.len(), BigRational::zero());
            }
            for (e, c) in prod.into_iter().enumerate() {
                acc[e] += c * &scale;
            }
        }
        MonomialPoly::new(acc)
    }
}

fn factorial(k: u32) -> BigInt {
    (1..=k as u64).map(BigInt::from).product()
}

impl fmt::Display for BinomialPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, t) in self.terms.iter().enumerate() {
            let sign = if t.c.is_negative() { "-" } else { "+" };
            if idx > 0 {
                write!(f, " {sign} ")?;
            } else if t.c.is_negative() {
                write!(f, "-")?;
            }
            let c = t.c.abs();
            if t.d == 0 {
                write!(f, "{c}")?;
                continue;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            match t.s.cmp(&0) {
                std::cmp::Ordering::Equal => write!(f, "C(n,{})", t.d)?,
                std::cmp::Ordering::Greater => write!(f, "C(n-{},{})", t.s, t.d)?,
                std::cmp::Ordering::Less => write!(f, "C(n+{},{})", -t.s, t.d)?,
            }
        }
        Ok(())
    }
}

/// A polynomial in `n` with exact rational coefficients; index = power.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MonomialPoly {
    coeffs: Vec<BigRational>,
}

impl MonomialPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        MonomialPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, n: i64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(n));
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }
}

#[derive(Serialize, Deserialize)]
struct RawMonomial {
    #[serde(with = "json::big_vec")]
    num: Vec<BigInt>,
    #[serde(with = "json::big_vec")]
    den: Vec<BigInt>,
}

impl Serialize for MonomialPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawMonomial {
            num: self.coeffs.iter().map(|c| c.numer().clone()).collect(),
            den: self.coeffs.iter().map(|c| c.denom().clone()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonomialPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawMonomial::deserialize(d)?;
        if raw.num.len() != raw.den.len() || raw.den.iter().any(Zero::is_zero) {
            return Err(serde::de::Error::custom(
                "num and den must be parallel arrays with nonzero denominators",
            ));
        }
        Ok(MonomialPoly::new(
            raw.num
                .into_iter()
                .zip(raw.den)
                .map(|(n, d)| BigRational::new(n, d))
                .collect(),
        ))
    }
}

impl fmt::Display for MonomialPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = e == 0 || !a.is_one();
            if show_coeff {
                if a.is_integer() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "({}/{})", a.numer(), a.denom())?;
                }
            }
            match e {
                0 => {}
                1 => write!(f, "n")?,
                _ => write!(f, "n^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(c: i64, s: i64, d: u32) -> BinomialTerm {
        BinomialTerm {
            c: BigInt::from(c),
            s,
            d,
        }
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn binomials_follow_the_polynomial_convention() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(3, 0), BigInt::from(1));
        assert_eq!(binom(2, 3), BigInt::from(0));
        assert_eq!(binom(-2, 2), BigInt::from(3));
        assert_eq!(binom(-1, 3), BigInt::from(-1));
    }

    #[test]
    fn evaluation_and_conversion() {
        let p = BinomialPoly::from_terms([term(3, 5, 1)]);
        assert_eq!(p.eval(6), BigInt::from(3));

        let p = BinomialPoly::from_terms([term(3, 7, 1), term(6, 8, 0)]);
        assert_eq!(
            p.to_monomial(),
            MonomialPoly::new(vec![rat(-15, 1), rat(3, 1)])
        );
        assert_eq!(p.to_monomial().to_string(), "3n - 15");

        let p = BinomialPoly::from_terms([term(1, 2, 2), term(1, 3, 1)]);
        assert_eq!(p.eval(5), BigInt::from(5));
        // (n-2)(n-3)/2 + n - 3 = n^2/2 - 3n/2
        assert_eq!(
            p.to_monomial(),
            MonomialPoly::new(vec![rat(0, 1), rat(-3, 2), rat(1, 2)])
        );
    }

    #[test]
    fn normalization_merges_and_drops() {
        let p =
            BinomialPoly::from_terms([term(2, 3, 1), term(-2, 3, 1), term(1, 9, 0), term(4, 0, 0)]);
        assert_eq!(p.terms(), &[term(5, 0, 0)]);
        assert_eq!(BinomialPoly::zero().eval(10), BigInt::zero());
        assert_eq!(BinomialPoly::zero().to_monomial().degree(), None);
    }

    #[test]
    fn json_shapes() {
        let p = BinomialPoly::from_terms([term(3, 5, 1)]);
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"terms":[{"c":3,"s":5,"d":1}]}"#
        );
        let m = MonomialPoly::new(vec![rat(0, 1), rat(-3, 2), rat(1, 2)]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"num":[0,-3,1],"den":[1,2,2]}"#);
        assert_eq!(serde_json::from_str::<MonomialPoly>(&s).unwrap(), m);
    }
}
