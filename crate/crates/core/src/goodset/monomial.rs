//! Solutions in `Aⁿ` of a monomial system `a^{z_i} = t_i`, `i = 1..n`,
//! whose exponent vectors `z_i` form a basis of `ℚⁿ`.
//!
//! Fractional powers are real principal powers: `x^{p/q}` with `q` odd is
//! defined for every nonzero `x`, with `q` even only for `x > 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groundset::GroundSet;
use crate::linalg::{invert, ExponentVector};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSystem {
    pub basis: Vec<ExponentVector>,
    #[serde(with = "rational::vec_as_strings")]
    pub target: Vec<Rational>,
}

/// `Π_j a_j^{z_j}` when it is defined and rational, None otherwise.
pub fn real_monomial(a: &[Rational], z: &ExponentVector) -> Result<Option<Rational>> {
    if a.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            found: a.len(),
        });
    }
    if a.iter().any(Zero::is_zero) {
        return Err(Error::ContainsZero);
    }
    let (d, numerators) = z.clear_denominators();
    let root = d
        .to_u32()
        .ok_or_else(|| Error::InvalidArgument("exponent denominators too large".into()))?;
    let mut negative = false;
    let mut w = Rational::one();
    for ((x, p), zj) in a.iter().zip(&numerators).zip(z.entries()) {
        if x.is_negative() {
            if zj.denom().is_even() {
                return Ok(None);
            }
            negative ^= zj.numer().is_odd();
        }
        w *= power(&x.abs(), p)?;
    }
    Ok(rational::exact_positive_root(&w, root).map(|r| if negative { -r } else { r }))
}

fn power(base: &Rational, exp: &BigInt) -> Result<Rational> {
    rational::pow_bigint(base, exp)
        .ok_or_else(|| Error::InvalidArgument("exponent too large".into()))
}

/// Every `a ∈ Aⁿ` with `a^{z_i} = t_i` for all `i`.
///
/// With `α = M⁻¹` for the matrix `M` of rows `z_i`, any solution has
/// `|a_j| = Π_i |t_i|^{α_{j,i}}`. Clearing the denominators of row `j` by
/// `Q_j` gives `|a_j|^{Q_j} = w_j`; the rational roots of that equation with
/// either sign are the candidates for `a_j`, and every candidate tuple is
/// checked by substitution.
pub fn solve_monomial_system(sys: &MonomialSystem, a: &GroundSet) -> Result<Vec<Vec<Rational>>> {
    let n = sys.basis.len();
    if sys.target.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sys.target.len(),
        });
    }
    a.require_nonzero()?;
    if sys.target.iter().any(Zero::is_zero) {
        return Err(Error::InvalidArgument("targets must be nonzero".into()));
    }
    let alpha = invert(&sys.basis)?;
    let mut candidates: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for row in &alpha {
        let q = rational::common_denominator(row);
        let root = q
            .to_u32()
            .ok_or_else(|| Error::InvalidArgument("inverse denominators too large".into()))?;
        let mut w = Rational::one();
        for (alpha_ji, t) in row.iter().zip(&sys.target) {
            let e = (alpha_ji * Rational::from_integer(q.clone())).to_integer();
            w *= power(&t.abs(), &e)?;
        }
        let options = match rational::exact_positive_root(&w, root) {
            Some(r) => [-r.clone(), r]
                .into_iter()
                .filter(|x| a.contains(x))
                .collect(),
            None => Vec::new(),
        };
        if options.is_empty() {
            return Ok(Vec::new());
        }
        candidates.push(options);
    }
    let mut solutions = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let point: Vec<Rational> = idx
            .iter()
            .zip(&candidates)
            .map(|(&i, c)| c[i].clone())
            .collect();
        if satisfies(sys, &point)? {
            solutions.push(point);
        }
        let mut k = n;
        loop {
            if k == 0 {
                solutions.sort();
                return Ok(solutions);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

pub(crate) fn satisfies(sys: &MonomialSystem, point: &[Rational]) -> Result<bool> {
    for (z, t) in sys.basis.iter().zip(&sys.target) {
        if real_monomial(point, z)?.as_ref() != Some(t) {
            return Ok(false);
        }
    }
    Ok(true)
}
