//! The multiplicative group generated by a finite set of rationals.
//!
//! Over ℚ the only torsion is `{±1}`, so `⟨A⟩ ≅ ℤ^r × ℤ/2` at most and the
//! rank `r` is the rank of the integer matrix of prime exponents. The sign
//! is carried separately and never counts towards the rank.

mod factor;
mod uniteq;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groundset::GroundSet;
use crate::linalg::integer_rank;
use crate::rational::{self, Rational};
use crate::setarith::{doubling, Mode};

pub use factor::{factor_natural, is_probable_prime, TRIAL_DIVISION_LIMIT};
pub use uniteq::{solve_unit_equation, UnitEquation, UnitEquationSolutions};

/// `sign · Π p^{e_p}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactorVector {
    pub negative: bool,
    pub exponents: BTreeMap<BigUint, i64>,
}

impl FactorVector {
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn reconstruct(&self) -> Rational {
        let mut acc = Rational::one();
        for (p, &e) in &self.exponents {
            acc *= rational::pow_int(&Rational::from_integer(BigInt::from(p.clone())), e);
        }
        if self.negative {
            -acc
        } else {
            acc
        }
    }
}

impl Serialize for FactorVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Shape {
            sign: i8,
            exponents: BTreeMap<String, i64>,
        }
        Shape {
            sign: self.sign(),
            exponents: self
                .exponents
                .iter()
                .map(|(p, e)| (p.to_string(), *e))
                .collect(),
        }
        .serialize(s)
    }
}

/// Signed prime factorization of a nonzero rational.
pub fn factorize(q: &Rational) -> Result<FactorVector> {
    if q.is_zero() {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    let mut exponents: BTreeMap<BigUint, i64> = BTreeMap::new();
    for (p, e) in factor_natural(q.numer().magnitude())? {
        exponents.insert(p, i64::from(e));
    }
    for (p, e) in factor_natural(q.denom().magnitude())? {
        *exponents.entry(p).or_insert(0) -= i64::from(e);
    }
    exponents.retain(|_, e| *e != 0);
    Ok(FactorVector {
        negative: q.is_negative(),
        exponents,
    })
}

/// Rank of the free part of `⟨A⟩ ⊆ ℚ^×`.
pub fn mult_rank(a: &GroundSet) -> Result<usize> {
    a.require_nonempty("generating set")?;
    a.require_nonzero()?;
    let vectors = a.iter().map(factorize).collect::<Result<Vec<_>>>()?;
    Ok(exponent_matrix_rank(&vectors))
}

pub(crate) fn exponent_matrix_rank(vectors: &[FactorVector]) -> usize {
    let primes: BTreeSet<&BigUint> = vectors.iter().flat_map(|v| v.exponents.keys()).collect();
    let rows = vectors
        .iter()
        .map(|v| {
            primes
                .iter()
                .map(|p| BigInt::from(v.exponents.get(*p).copied().unwrap_or(0)))
                .collect()
        })
        .collect();
    integer_rank(rows)
}

/// Rank of `a⁻¹·A` (with `a = min A`) against the doubling `K = |A·A|/|A|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankDoublingCheck {
    pub rank: usize,
    #[serde(with = "rational::as_string")]
    pub doubling: Rational,
    #[serde(with = "rational::as_string")]
    pub normalizer: Rational,
    /// Whether `a⁻¹·A` lies in the positive rationals.
    pub positive_normalized: bool,
    /// `r ≤ 2K`; only asserted when the normalized set is positive.
    pub elementary_ok: Option<bool>,
    /// `r ≤ 16K`.
    pub lemma_ok: bool,
}

pub fn rank_doubling_check(a: &GroundSet, budget: &Budget) -> Result<RankDoublingCheck> {
    a.require_nonzero()?;
    if a.len() < 2 {
        return Err(Error::InvalidArgument("need at least two elements".into()));
    }
    let normalizer = a.min().expect("nonempty").clone();
    let inv = normalizer.recip();
    let shifted = a.map(|x| x * &inv);
    let rank = mult_rank(&shifted)?;
    let k = doubling(a, Mode::Multiplicative, budget)?;
    let r = Rational::from_integer(rank.into());
    let positive_normalized = shifted.iter().all(|x| x.is_positive());
    let elementary_ok = positive_normalized.then(|| r <= rational::int(2) * &k);
    let lemma_ok = r <= rational::int(16) * &k;
    Ok(RankDoublingCheck {
        rank,
        doubling: k,
        normalizer,
        positive_normalized,
        elementary_ok,
        lemma_ok,
    })
}

/// Largest exponent `subspace_bound` will materialize.
const MAX_BOUND_EXPONENT: u64 = 1 << 24;

/// `(8l)^{4l⁴(l + lr + 1)}`, the bound on non-degenerate solutions of
/// `c_1 z_1 + … + c_l z_l = 1` with `z_i` in a rank-`r` group.
///
/// With `nonzero_target` the right-hand side is a general `m ≠ 0`: dividing
/// by `m` moves the `z_i` into a group of rank `r + 1`, which multiplies the
/// bound by `(8l)^{4l⁵}`.
pub fn subspace_bound(l: u64, r: u64, nonzero_target: bool) -> Result<BigUint> {
    if l == 0 {
        return Err(Error::InvalidArgument("l must be positive".into()));
    }
    let rank = if nonzero_target { r + 1 } else { r };
    let exponent = l
        .checked_pow(4)
        .and_then(|l4| l4.checked_mul(4))
        .and_then(|c| {
            l.checked_mul(rank)
                .and_then(|lr| lr.checked_add(l + 1))
                .and_then(|s| c.checked_mul(s))
        })
        .filter(|&e| e <= MAX_BOUND_EXPONENT)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("bound for l = {l}, r = {r} is too large"))
        })?;
    Ok(BigUint::from(8 * l).pow(exponent as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn set(v: &[i64]) -> GroundSet {
        GroundSet::from_ints(v.iter().copied())
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&int(12)).unwrap();
        assert_eq!(f.sign(), 1);
        assert_eq!(
            f.exponents,
            BTreeMap::from([(BigUint::from(2u32), 2), (BigUint::from(3u32), 1)])
        );
        let f = factorize(&ratio(-3, 4)).unwrap();
        assert_eq!(f.sign(), -1);
        assert_eq!(
            f.exponents,
            BTreeMap::from([(BigUint::from(2u32), -2), (BigUint::from(3u32), 1)])
        );
        let f = factorize(&int(1)).unwrap();
        assert!(f.exponents.is_empty() && f.sign() == 1);
        assert!(factorize(&int(0)).is_err());
        assert_eq!(
            serde_json::to_string(&factorize(&ratio(-3, 4)).unwrap()).unwrap(),
            r#"{"sign":-1,"exponents":{"2":-2,"3":1}}"#
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(mult_rank(&set(&[2, 4, 8])).unwrap(), 1);
        assert_eq!(mult_rank(&set(&[2, 3, 6])).unwrap(), 2);
        assert_eq!(mult_rank(&set(&[1])).unwrap(), 0);
        assert_eq!(mult_rank(&set(&[-1, 1])).unwrap(), 0);
        assert!(mult_rank(&set(&[0, 2])).is_err());
    }

    #[test]
    fn rank_doubling_examples() {
        let b = Budget::default();
        let c = rank_doubling_check(&set(&[2, 4, 8]), &b).unwrap();
        assert_eq!(c.rank, 1);
        assert_eq!(c.doubling, ratio(5, 3));
        assert_eq!(c.elementary_ok, Some(true));
        assert!(c.lemma_ok);

        // {1,2,3,5,7}: A·A has 15 elements (products of two from the set, 1 included).
        let c = rank_doubling_check(&set(&[1, 2, 3, 5, 7]), &b).unwrap();
        assert_eq!(c.rank, 4);
        assert_eq!(c.doubling, int(3));
        assert_eq!(c.elementary_ok, Some(true));
        assert!(c.lemma_ok);

        let c = rank_doubling_check(&set(&[-2, 2]), &b).unwrap();
        assert_eq!(c.rank, 0);
        assert!(!c.positive_normalized);
        assert_eq!(c.elementary_ok, None);
        assert!(c.lemma_ok);
        assert_eq!(mult_rank(&set(&[-2, 2])).unwrap(), 1);

        assert!(rank_doubling_check(&set(&[3]), &b).is_err());
    }

    #[test]
    fn subspace_bound_values() {
        assert_eq!(
            subspace_bound(1, 1, false).unwrap(),
            BigUint::from(68_719_476_736u64)
        );
        assert_eq!(
            subspace_bound(1, 0, false).unwrap(),
            BigUint::from(16_777_216u64)
        );
        for l in 1..4 {
            for r in 0..4 {
                let base = subspace_bound(l, r, false).unwrap();
                assert!(subspace_bound(l, r + 1, false).unwrap() > base);
                let adjust = BigUint::from(8 * l).pow((4 * l.pow(5)) as u32);
                assert_eq!(subspace_bound(l, r, true).unwrap(), base * adjust);
            }
        }
        assert!(subspace_bound(0, 1, false).is_err());
        assert!(subspace_bound(50, 50, false).is_err());
    }

    fn rational_strategy() -> impl Strategy<Value = Rational> {
        (-1_000_000i64..=1_000_000, 1i64..=1_000_000)
            .prop_filter("nonzero", |(p, _)| *p != 0)
            .prop_map(|(p, q)| ratio(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn factorize_round_trips(q in rational_strategy()) {
            prop_assert_eq!(factorize(&q).unwrap().reconstruct(), q);
        }
    }

    proptest! {
        #[test]
        fn rank_is_closed_under_products(raw in prop::collection::vec(1i64..200, 1..8)) {
            let a = set(&raw);
            let aa = crate::setarith::productset(&a, &a).unwrap();
            prop_assert_eq!(mult_rank(&a.union(&aa)).unwrap(), mult_rank(&a).unwrap());
        }

        #[test]
        fn rank_is_monotone(raw in prop::collection::vec(1i64..200, 2..10), cut in 1usize..9) {
            let a = set(&raw);
            let cut = cut.min(a.len());
            let sub = GroundSet::new(a.elements()[..cut].iter().cloned());
            prop_assert!(mult_rank(&sub).unwrap() <= mult_rank(&a).unwrap());
        }
    }
}
