//! Sparse multivariate polynomials with rational coefficients.

mod enumerate;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::ExponentVector;
use crate::rational::{self, Rational};

pub(crate) use enumerate::for_each_tuple;
pub use enumerate::{energy, image_set, value_histogram, zero_count, PowerTable, RepCountMap};
pub use parse::{infer_nvars, parse_poly, parse_poly_with, ParseOptions};

/// Exponents of a single monomial, one entry per variable.
pub type Monomial = Vec<u32>;

/// `Σ c_v x^v` with no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// The variable `x_{index+1}` (zero-based index).
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exponents: Monomial, coeff: Rational) -> Self {
        Self::from_terms(nvars, [(exponents, coeff)])
    }

    /// Builds a polynomial, merging like terms and dropping zeros.
    ///
    /// Panics if an exponent vector has the wrong length.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = SparsePoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "monomial length must equal variable count");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Total degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, e: &[u32]) -> Option<&Rational> {
        self.terms.get(e)
    }

    /// Exponent support as rational vectors, in lexicographic order.
    pub fn support_vectors(&self) -> Vec<ExponentVector> {
        self.terms
            .keys()
            .map(|e| ExponentVector::from_ints(e.iter().copied()))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SparsePoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, v)| (e.clone(), v * c)),
        )
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = SparsePoly::constant(self.nvars, Rational::one());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact value at `point` by per-term summation.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term *= rational::pow_int(x, i64::from(k));
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Substitutes `x_{index+1} = value`; the variable count is unchanged.
    pub fn substitute(&self, index: usize, value: &Rational) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e = e.clone();
            let k = std::mem::take(&mut e[index]);
            (e, c * rational::pow_int(value, i64::from(k)))
        });
        SparsePoly::from_terms(self.nvars, terms)
    }

    /// Renames variables: variable `i` of `self` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; self.nvars];
            for (i, &k) in e.iter().enumerate() {
                out[perm[i]] = k;
            }
            (out, c.clone())
        });
        SparsePoly::from_terms(self.nvars, terms)
    }

    /// Polynomial made of the terms whose exponents are in `subset`.
    pub fn restrict_to(&self, subset: &[&Monomial]) -> Self {
        SparsePoly::from_terms(
            self.nvars,
            subset
                .iter()
                .filter_map(|e| self.terms.get(*e).map(|c| ((*e).clone(), c.clone()))),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization cannot fail")
    }

    /// Parses the canonical JSON list. `nvars` is needed for the empty list.
    pub fn from_json(text: &str, nvars: usize) -> Result<Self> {
        let records: Vec<TermRecord> = serde_json::from_str(text)?;
        let mut p = SparsePoly::zero(nvars);
        for r in records {
            if r.exponents.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: r.exponents.len(),
                });
            }
            p.add_term(r.exponents, r.coeff);
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    exponents: Vec<u32>,
    #[serde(with = "rational::as_string")]
    coeff: Rational,
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(e, c)| TermRecord {
            exponents: e.clone(),
            coeff: c.clone(),
        }))
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        let nvars = records.first().map_or(0, |r| r.exponents.len());
        let mut p = SparsePoly::zero(nvars);
        for r in records {
            if r.exponents.len() != nvars {
                return Err(serde::de::Error::custom("ragged exponent vectors"));
            }
            p.add_term(r.exponents, r.coeff);
        }
        Ok(p)
    }
}

pub(crate) fn var_name(index: usize) -> String {
    if index < 9 {
        format!("x{}", index + 1)
    } else {
        format!("x{{{}}}", index + 1)
    }
}

/// Writes a form that [`parse_poly`] reads back, highest terms first.
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let magnitude = c.abs();
            let is_const = e.iter().all(|&k| k == 0);
            let mut first = true;
            if is_const || !magnitude.is_one() {
                write!(f, "{magnitude}")?;
                first = false;
            }
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", var_name(j))?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

fn check_same_vars(a: &SparsePoly, b: &SparsePoly) {
    assert_eq!(
        a.nvars, b.nvars,
        "polynomials over different variable counts"
    );
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        check_same_vars(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        check_same_vars(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        check_same_vars(self, rhs);
        let mut out = SparsePoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1
                    .iter()
                    .zip(e2)
                    .map(|(&a, &b)| u32::checked_add(a, b).expect("exponent overflow"))
                    .collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), -c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn eval_examples() {
        let p = parse_poly("x1 + x2", 2).unwrap();
        assert_eq!(p.eval(&[int(1), int(2)]).unwrap(), int(3));
        let p = parse_poly("x1*x2 + 1", 2).unwrap();
        assert_eq!(p.eval(&[int(2), int(3)]).unwrap(), int(7));
        let p = parse_poly("(x1+1)*(x2+1)", 2).unwrap();
        assert_eq!(p.eval(&[int(1), int(1)]).unwrap(), int(4));
        assert!(p.eval(&[int(1)]).is_err());
        let p = parse_poly("x1^3 - 1/2*x2", 2).unwrap();
        assert_eq!(p.eval(&[ratio(-1, 2), int(4)]).unwrap(), ratio(-17, 8));
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "x1 + x2",
            "3*x1^2*x2 - x1 + 7/2",
            "-x1*x2 - 1",
            "x{10}^2 + x1",
        ] {
            let p = parse_poly(text, 10).unwrap();
            let again = parse_poly(&p.to_string(), 10).unwrap();
            assert_eq!(p, again, "{text} printed as {p}");
        }
    }

    #[test]
    fn json_round_trip_and_shape() {
        let p = parse_poly("2*x1 - 1/3", 2).unwrap();
        let json = p.to_json();
        assert_eq!(
            json,
            r#"[{"exponents":[0,0],"coeff":"-1/3"},{"exponents":[1,0],"coeff":"2"}]"#
        );
        assert_eq!(SparsePoly::from_json(&json, 2).unwrap(), p);
        assert!(SparsePoly::from_json(&json, 3).is_err());
    }

    #[test]
    fn substitution_and_permutation() {
        let p = parse_poly("x1*x2 + x3", 3).unwrap();
        let q = p.substitute(0, &int(2));
        assert_eq!(q, parse_poly("2*x2 + x3", 3).unwrap());
        let r = p.permute_vars(&[2, 0, 1]);
        assert_eq!(r, parse_poly("x3*x1 + x2", 3).unwrap());
    }

    #[test]
    fn arithmetic() {
        let a = parse_poly("x1 + 1", 2).unwrap();
        let b = parse_poly("x1 - 1", 2).unwrap();
        assert_eq!(&a * &b, parse_poly("x1^2 - 1", 2).unwrap());
        assert!((&a - &a).is_zero());
        assert_eq!(a.pow(3), parse_poly("x1^3 + 3*x1^2 + 3*x1 + 1", 2).unwrap());
        assert_eq!(a.degree(), 1);
        assert_eq!((&a * &b).degree(), 2);
    }
}
