//! The good set `𝒢 ⊆ Aⁿ`: tuples at which no nonempty subcollection of the
//! terms of `F` sums to zero, and representation counts restricted to it.

mod env;
mod monomial;

use std::collections::{HashMap, HashSet};

use num_traits::Zero;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groundset::GroundSet;
use crate::poly::{for_each_tuple, Monomial, PowerTable, RepCountMap, SparsePoly};
use crate::rational::Rational;

pub use env::{
    env_verify, CurveVariable, EnvConfig, EnvReport, EnvVerdict, Quantity, ReferenceCurve,
};
pub use monomial::{real_monomial, solve_monomial_system, MonomialSystem};

/// All subset sums of `values`, the empty one included.
fn subset_sums(values: &[Rational]) -> Vec<Rational> {
    let mut sums = vec![Rational::zero()];
    for v in values {
        let extended: Vec<Rational> = sums.iter().map(|s| s + v).collect();
        sums.extend(extended);
    }
    sums
}

/// Whether some nonempty subcollection of `values` sums to zero.
///
/// Meet in the middle: split into halves `L`, `R`; a vanishing subsum is a
/// nonempty `L`-sum `x` with `-x` among all `R`-sums, or a vanishing
/// nonempty `R`-sum.
pub fn has_zero_subsum(values: &[Rational]) -> bool {
    let (left, right) = values.split_at(values.len() / 2);
    let right_sums = subset_sums(right);
    // index 0 is the empty sum
    if right_sums[1..].iter().any(Zero::is_zero) {
        return true;
    }
    let lookup: HashSet<&Rational> = right_sums.iter().collect();
    subset_sums(left)[1..].iter().any(|x| lookup.contains(&-x))
}

/// The values `c_v a^v` of the terms of `F` at a point.
pub fn term_values(f: &SparsePoly, point: &[Rational]) -> Result<Vec<Rational>> {
    if point.len() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            found: point.len(),
        });
    }
    Ok(f.terms()
        .iter()
        .map(|(e, c)| {
            e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| {
                acc * num_traits::pow(x.clone(), k as usize)
            })
        })
        .collect())
}

/// True iff some nonempty subset of the support of `F` has vanishing term sum at `a`.
pub fn is_bad_tuple(f: &SparsePoly, a: &[Rational]) -> Result<bool> {
    if a.iter().any(Zero::is_zero) {
        return Err(Error::ContainsZero);
    }
    Ok(has_zero_subsum(&term_values(f, a)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodSetReport {
    /// `|Aⁿ ∖ 𝒢|`.
    pub bad_count: u64,
    /// `(2^{|ℐ_F|} − 1) · deg F · |A|^{n−1}`.
    pub bad_bound: u128,
    pub rep_counts: RepCountMap,
    pub sup_rep: u64,
    pub restricted_energy: u64,
    pub num_terms: usize,
    pub degree: u32,
}

impl GoodSetReport {
    pub fn good_count(&self) -> u64 {
        self.rep_counts.total()
    }
}

pub(crate) fn bad_bound(f: &SparsePoly, size: usize) -> u128 {
    let subsets = 1u128
        .checked_shl(f.num_terms() as u32)
        .map_or(u128::MAX, |v| v - 1);
    let power = (size as u128)
        .checked_pow(f.nvars().saturating_sub(1) as u32)
        .unwrap_or(u128::MAX);
    subsets
        .saturating_mul(u128::from(f.degree()))
        .saturating_mul(power)
}

type Counters = (HashMap<Rational, u64>, u64);

/// Streams `Aⁿ`, counting bad tuples and the values of `F` on good ones.
pub fn good_set_report(f: &SparsePoly, a: &GroundSet, budget: &Budget) -> Result<GoodSetReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    a.require_nonzero()?;
    let n = f.nvars();
    let domain = budget.check_tuples("good-set enumeration", a.len(), n)?;
    let table = PowerTable::new(a, f.max_exponent());
    let terms: Vec<(Monomial, Rational)> = f
        .terms()
        .iter()
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    let (counts, bad_count) = for_each_tuple(
        a.len(),
        n,
        || (HashMap::new(), 0u64),
        |(counts, bad): &mut Counters, idx| {
            let values: Vec<Rational> = terms.iter().map(|(e, c)| table.term(c, e, idx)).collect();
            if has_zero_subsum(&values) {
                *bad += 1;
            } else {
                let total = values.into_iter().fold(Rational::zero(), |s, v| s + v);
                *counts.entry(total).or_insert(0) += 1;
            }
        },
        |(mut ca, ba), (cb, bb)| {
            for (k, v) in cb {
                *ca.entry(k).or_insert(0) += v;
            }
            (ca, ba + bb)
        },
    );
    let rep_counts = RepCountMap::from_hash(counts, domain);
    Ok(GoodSetReport {
        bad_count,
        bad_bound: bad_bound(f, a.len()),
        sup_rep: rep_counts.sup(),
        restricted_energy: rep_counts.energy(),
        rep_counts,
        num_terms: f.num_terms(),
        degree: f.degree(),
    })
}
