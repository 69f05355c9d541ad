//! Set families, the energy counterexample polynomial and the experiment
//! runner.

mod experiment;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::degeneracy::is_degenerate;
use crate::error::{Error, Result};
use crate::groundset::GroundSet;
use crate::multgroup::is_probable_prime;
use crate::poly::SparsePoly;
use crate::rational::{self, Rational};

pub use experiment::{
    run_experiment, summarize_csv, write_csv, write_json, ExperimentConfig, ExperimentReport,
    ExperimentRow, Family, Outputs, CSV_COLUMNS, SCHEMA_VERSION,
};

/// The seeded generator behind every random draw: ChaCha with 8 rounds,
/// whose output stream is fixed for a given seed on every platform.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `{q, q², …, q^N}`.
pub fn gen_gp(q: &Rational, n: usize) -> Result<GroundSet> {
    if q.is_zero() || q.abs().is_one() {
        return Err(Error::InvalidArgument(format!(
            "ratio {q} does not give {n} distinct powers"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let mut out = Vec::with_capacity(n);
    let mut acc = q.clone();
    for _ in 0..n {
        out.push(acc.clone());
        acc *= q;
    }
    Ok(GroundSet::new(out))
}

/// `{a, a + d, …, a + (N−1)d}`.
pub fn gen_ap(a: &Rational, d: &Rational, n: usize) -> Result<GroundSet> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("step must be nonzero".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    Ok(GroundSet::new(
        (0..n).map(|i| a + d * rational::int(i as i64)),
    ))
}

/// Union of `gen_gp(q, N)` over the given ratios.
pub fn gen_union_gp(ratios: &[Rational], n: usize) -> Result<GroundSet> {
    if ratios.is_empty() {
        return Err(Error::InvalidArgument("need at least one ratio".into()));
    }
    let mut out = GroundSet::new([]);
    for q in ratios {
        out = out.union(&gen_gp(q, n)?);
    }
    Ok(out)
}

/// All `Π p^{e_p}` with `|e_p| ≤ h`.
pub fn exponent_box(primes: &[u64], h: u32, budget: &Budget) -> Result<GroundSet> {
    let mut seen = std::collections::BTreeSet::new();
    for &p in primes {
        if !is_probable_prime(&BigUint::from(p)) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if !seen.insert(p) {
            return Err(Error::InvalidArgument(format!("prime {p} listed twice")));
        }
    }
    let side = 2 * h as usize + 1;
    budget.check_tuples("exponent box", side, primes.len())?;
    let h = i64::from(h);
    let mut values = vec![Rational::one()];
    for &p in primes {
        let base = rational::int(p as i64);
        let powers: Vec<Rational> = (-h..=h).map(|e| rational::pow_int(&base, e)).collect();
        values = values
            .iter()
            .flat_map(|x| powers.iter().map(move |y| x * y))
            .collect();
    }
    Ok(GroundSet::new(values))
}

/// `N` distinct elements of the exponent box over `primes`, drawn with
/// [`seeded_rng`].
pub fn gen_group_sample(
    primes: &[u64],
    h: u32,
    n: usize,
    seed: u64,
    budget: &Budget,
) -> Result<GroundSet> {
    let space = exponent_box(primes, h, budget)?;
    if space.len() < n {
        return Err(Error::InvalidArgument(format!(
            "sample space has {} elements, {n} requested",
            space.len()
        )));
    }
    let mut rng = seeded_rng(seed);
    let picks = rand::seq::index::sample(&mut rng, space.len(), n);
    Ok(GroundSet::new(
        picks.into_iter().map(|i| space.elements()[i].clone()),
    ))
}

/// `F = f_0(x_1,x_2) + x_3 f_1(x_1,x_2) + … + x_n f_{n−2}(x_1,x_2)` with
/// `f_i = x_1x_2 − b x_1 + (i−1)(x_1x_2 − a x_2)`.
///
/// Every `f_i` vanishes at `(a, b)`, so `F(a, b, ·, …, ·) ≡ 0` and
/// `E_F(A) ≥ |A|^{2n−4}` whenever `a, b ∈ A`, although `F` is non-degenerate.
#[derive(Clone, Debug, Serialize)]
pub struct AlgoCounterexample {
    pub poly: SparsePoly,
    /// The `f_i` as polynomials in `x_1, x_2`.
    pub components: Vec<SparsePoly>,
    #[serde(with = "rational::vec_as_strings")]
    pub zero: Vec<Rational>,
}

pub fn gen_algo_counterexample(n: usize, a: &Rational, b: &Rational) -> Result<AlgoCounterexample> {
    if n < 5 {
        return Err(Error::InvalidArgument("n must be at least 5".into()));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidArgument(
            "the common zero must have nonzero coordinates".into(),
        ));
    }
    let x1 = SparsePoly::var(2, 0);
    let x2 = SparsePoly::var(2, 1);
    let x1x2 = &x1 * &x2;
    let first = &x1x2 - &x1.scale(b);
    let second = &x1x2 - &x2.scale(a);
    let components: Vec<SparsePoly> = (0..n - 1)
        .map(|i| &first + &second.scale(&rational::int(i as i64 - 1)))
        .collect();

    let mut poly = SparsePoly::zero(n);
    for (i, f) in components.iter().enumerate() {
        let lifted = SparsePoly::from_terms(
            n,
            f.terms().iter().map(|(e, c)| {
                let mut exps = vec![0; n];
                exps[0] = e[0];
                exps[1] = e[1];
                if i > 0 {
                    exps[i + 1] = 1;
                }
                (exps, c.clone())
            }),
        );
        poly = &poly + &lifted;
    }

    let restricted = poly.substitute(0, a).substitute(1, b);
    if !restricted.is_zero() {
        return Err(Error::InvariantViolation(
            "F(a, b, ·) does not vanish".into(),
        ));
    }
    if is_degenerate(&poly)? {
        return Err(Error::InvariantViolation(
            "counterexample is degenerate".into(),
        ));
    }
    Ok(AlgoCounterexample {
        poly,
        components,
        zero: vec![a.clone(), b.clone()],
    })
}
