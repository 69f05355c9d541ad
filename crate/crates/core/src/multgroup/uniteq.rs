//! Box-restricted enumeration of unit-equation solutions
//! `c_1 z_1 + … + c_l z_l = m` with every `z_i` in the group generated by a
//! fixed set of multiplicatively independent rationals.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use super::{exponent_matrix_rank, factorize, subspace_bound};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groundset::GroundSet;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitEquation {
    #[serde(with = "rational::vec_as_strings")]
    pub coefficients: Vec<Rational>,
    #[serde(with = "rational::as_string")]
    pub target: Rational,
    /// Free generators of the group. Listing `-1` adjoins the sign.
    pub generators: GroundSet,
    /// Every generator exponent ranges over `[-height, height]`.
    pub height: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitEquationSolutions {
    /// Sorted lexicographically by value.
    #[serde(serialize_with = "serialize_solutions")]
    pub solutions: Vec<Vec<Rational>>,
    pub count: usize,
    pub rank: usize,
    pub signed: bool,
    /// Number of group elements in the exponent box.
    pub box_size: usize,
    /// Counts are exact within the box only.
    pub box_restricted: bool,
    #[serde(serialize_with = "serialize_bound")]
    pub bound: Option<BigUint>,
    pub within_bound: Option<bool>,
}

fn serialize_solutions<S: Serializer>(
    v: &[Vec<Rational>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = v
        .iter()
        .map(|t| t.iter().map(ToString::to_string).collect())
        .collect();
    text.serialize(s)
}

fn serialize_bound<S: Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(ToString::to_string).serialize(s)
}

/// Validated group data: the free generators and whether `-1` is adjoined.
pub(crate) struct UnitGroup {
    pub free: Vec<Rational>,
    pub signed: bool,
}

impl UnitGroup {
    pub fn new(generators: &GroundSet) -> Result<Self> {
        generators.require_nonzero()?;
        let minus_one = -Rational::one();
        let signed = generators.contains(&minus_one);
        let free: Vec<Rational> = generators
            .iter()
            .filter(|g| **g != minus_one)
            .cloned()
            .collect();
        let vectors = free.iter().map(factorize).collect::<Result<Vec<_>>>()?;
        if exponent_matrix_rank(&vectors) != free.len() {
            return Err(Error::InvalidArgument(
                "generators are not multiplicatively independent".into(),
            ));
        }
        Ok(UnitGroup { free, signed })
    }

    pub fn rank(&self) -> usize {
        self.free.len()
    }

    /// Every `±Π g^{e_g}` with `|e_g| ≤ h`, in odometer order over the exponents.
    pub fn elements(&self, h: u32) -> Vec<Rational> {
        let h = i64::from(h);
        let mut out = vec![Rational::one()];
        for g in &self.free {
            let powers: Vec<Rational> = (-h..=h).map(|e| rational::pow_int(g, e)).collect();
            out = out
                .iter()
                .flat_map(|x| powers.iter().map(move |p| x * p))
                .collect();
        }
        if self.signed {
            let negated: Vec<Rational> = out.iter().map(|x| -x).collect();
            out.extend(negated);
        }
        out
    }
}

/// True if some nonempty proper subset of `terms` sums to zero.
pub(crate) fn has_vanishing_proper_subsum(terms: &[Rational]) -> bool {
    let l = terms.len();
    let full = (1u64 << l) - 1;
    (1..full).any(|mask| {
        terms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(Rational::zero(), |acc, (_, t)| acc + t)
            .is_zero()
    })
}

const MAX_TERMS: usize = 20;

/// All solutions with every `z_i` in the exponent box, excluding those with
/// a vanishing proper subsum.
///
/// The first `l - 1` coordinates are enumerated and the last is solved for
/// and looked up in the box.
pub fn solve_unit_equation(eq: &UnitEquation, budget: &Budget) -> Result<UnitEquationSolutions> {
    let l = eq.coefficients.len();
    if l == 0 {
        return Err(Error::InvalidArgument(
            "need at least one coefficient".into(),
        ));
    }
    if l > MAX_TERMS {
        return Err(Error::InvalidArgument(format!(
            "at most {MAX_TERMS} terms are supported"
        )));
    }
    if eq.coefficients.iter().any(Zero::is_zero) {
        return Err(Error::InvalidArgument(
            "coefficients must be nonzero".into(),
        ));
    }
    if eq.target.is_zero() {
        return Err(Error::ZeroTarget);
    }
    let group = UnitGroup::new(&eq.generators)?;
    let side = 2 * eq.height as usize + 1;
    let per_term = side
        .checked_pow(group.rank() as u32)
        .and_then(|v| v.checked_mul(if group.signed { 2 } else { 1 }))
        .ok_or_else(|| Error::budget("unit-equation box", "overflow", budget.max_tuples))?;
    budget.check_tuples("unit-equation box", per_term, l)?;

    let elements = group.elements(eq.height);
    let members: HashSet<&Rational> = elements.iter().collect();
    let last_coeff_inv = eq.coefficients[l - 1].recip();
    let head = l - 1;
    let n = elements.len();

    let mut solutions: Vec<Vec<Rational>> = crate::poly::for_each_tuple(
        n,
        head,
        Vec::new,
        |acc: &mut Vec<Vec<Rational>>, idx| {
            let mut terms: Vec<Rational> = idx
                .iter()
                .zip(&eq.coefficients)
                .map(|(&i, c)| c * &elements[i])
                .collect();
            let partial = terms.iter().fold(Rational::zero(), |a, t| a + t);
            let last = (&eq.target - partial) * &last_coeff_inv;
            if !members.contains(&last) {
                return;
            }
            terms.push(&eq.coefficients[l - 1] * &last);
            if has_vanishing_proper_subsum(&terms) {
                return;
            }
            let mut z: Vec<Rational> = idx.iter().map(|&i| elements[i].clone()).collect();
            z.push(last);
            acc.push(z);
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    solutions.par_sort();

    let bound = subspace_bound(l as u64, group.rank() as u64 + 1, !eq.target.is_one()).ok();
    let count = solutions.len();
    let within_bound = bound.as_ref().map(|b| BigUint::from(count) <= *b);
    Ok(UnitEquationSolutions {
        count,
        solutions,
        rank: group.rank(),
        signed: group.signed,
        box_size: n,
        box_restricted: true,
        bound,
        within_bound,
    })
}
