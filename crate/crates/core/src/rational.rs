//! Exact rationals: literal parsing, the height function and serde helpers.
//!
//! Values are `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator, so `==` and `Hash` agree with
//! mathematical equality.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Parses `int`, `int/posint` or a finite decimal such as `-0.125`.
///
/// Surrounding whitespace is ignored. Decimals are converted exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let offset = text.len() - text.trim_start().len();
    if trimmed.is_empty() {
        return Err(Error::parse(offset, "empty rational literal"));
    }
    if let Some((num, den)) = trimmed.split_once('/') {
        let numer = parse_int(num, offset)?;
        let den_offset = offset + num.len() + 1;
        if den.starts_with(['-', '+']) {
            return Err(Error::parse(
                den_offset,
                "denominator must be a positive integer",
            ));
        }
        let denom = parse_int(den, den_offset)?;
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((whole, frac)) = trimmed.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(
                offset + whole.len() + 1,
                "expected digits after decimal point",
            ));
        }
        let negative = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        let int_part = if whole_abs.is_empty() {
            if whole.len() > 1 {
                return Err(Error::parse(offset, "malformed sign"));
            }
            BigInt::zero()
        } else {
            parse_int(whole_abs, offset + (whole.len() - whole_abs.len()))?
        };
        let frac_part: BigInt = frac.parse().expect("digits checked above");
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let magnitude = Rational::new(int_part * &scale + frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    Ok(Rational::from_integer(parse_int(trimmed, offset)?))
}

fn parse_int(text: &str, pos: usize) -> Result<BigInt> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(pos, format!("malformed integer `{text}`")));
    }
    text.parse()
        .map_err(|_| Error::parse(pos, format!("malformed integer `{text}`")))
}

/// `max(|p|, |q|)` for `p/q` in lowest terms, with `height(0) = 0`.
pub fn height(q: &Rational) -> BigInt {
    if q.is_zero() {
        return BigInt::zero();
    }
    let p = q.numer().abs();
    let d = q.denom().clone();
    if p > d {
        p
    } else {
        d
    }
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact rational power with an integer exponent; `base` must be nonzero
/// when `exp < 0`.
pub fn pow_int(base: &Rational, exp: i64) -> Rational {
    let magnitude = exp.unsigned_abs();
    let mut acc = Rational::one();
    let mut sq = base.clone();
    let mut e = magnitude;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Same as [`pow_int`] but for big exponents (only their sign and
/// magnitude matter; magnitudes beyond `u64` are rejected by returning None).
pub fn pow_bigint(base: &Rational, exp: &BigInt) -> Option<Rational> {
    let magnitude = exp.magnitude().to_u64()?;
    let e = i64::try_from(magnitude).ok()?;
    Some(if exp.sign() == Sign::Minus {
        pow_int(base, -e)
    } else {
        pow_int(base, e)
    })
}

fn exact_root_uint(value: &BigUint, k: u32) -> Option<BigUint> {
    let root = value.nth_root(k);
    if num_traits::pow(root.clone(), k as usize) == *value {
        Some(root)
    } else {
        None
    }
}

/// The positive rational `k`-th root of a positive rational, if it exists.
pub fn exact_positive_root(value: &Rational, k: u32) -> Option<Rational> {
    assert!(k >= 1, "root index must be positive");
    if !value.is_positive() {
        return None;
    }
    let num = exact_root_uint(value.numer().magnitude(), k)?;
    let den = exact_root_uint(value.denom().magnitude(), k)?;
    Some(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Least common multiple of the denominators of `values` (1 when empty).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Serde adapter: a rational as its canonical string (`"p/q"` or `"p"`).
pub mod as_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = RationalText::deserialize(d)?;
        text.into_rational().map_err(serde::de::Error::custom)
    }

    /// Accepts both `"3/4"` and bare JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RationalText {
        Str(String),
        Int(i64),
    }

    impl RationalText {
        pub(crate) fn into_rational(self) -> crate::Result<Rational> {
            match self {
                RationalText::Str(s) => parse_rational(&s),
                RationalText::Int(i) => Ok(super::int(i)),
            }
        }
    }
}

/// Serde adapter for `Vec<Rational>` as a JSON array of strings.
pub mod vec_as_strings {
    use super::as_string::RationalText;
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<RationalText>::deserialize(d)?
            .into_iter()
            .map(|t| t.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}
