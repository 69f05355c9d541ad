//! Evaluation of a polynomial over every tuple of `Aⁿ`.
//!
//! Tuples are visited in odometer order over the sorted ground set; the
//! leading coordinate is split across rayon workers, each with a private
//! accumulator that is merged at the end.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{Monomial, SparsePoly};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groundset::GroundSet;
use crate::rational::Rational;

/// `powers[i][e] = a_i^e` for every element of a ground set.
pub struct PowerTable {
    powers: Vec<Vec<Rational>>,
}

impl PowerTable {
    pub fn new(a: &GroundSet, max_exp: u32) -> Self {
        let powers = a
            .iter()
            .map(|x| {
                let mut row = Vec::with_capacity(max_exp as usize + 1);
                let mut acc = Rational::one();
                row.push(acc.clone());
                for _ in 0..max_exp {
                    acc = &acc * x;
                    row.push(acc.clone());
                }
                row
            })
            .collect();
        PowerTable { powers }
    }

    /// `c · Π_j a_{idx_j}^{e_j}`.
    pub fn term(&self, coeff: &Rational, exps: &[u32], idx: &[usize]) -> Rational {
        let mut v = coeff.clone();
        for (&i, &e) in idx.iter().zip(exps) {
            if e > 0 {
                v *= &self.powers[i][e as usize];
            }
        }
        v
    }

    pub fn value(&self, terms: &[(Monomial, Rational)], idx: &[usize]) -> Rational {
        terms
            .iter()
            .fold(Rational::zero(), |acc, (e, c)| acc + self.term(c, e, idx))
    }
}

/// Visits every index tuple of `{0..size}ⁿ`, folding into per-worker state.
pub(crate) fn for_each_tuple<S, I, F, M>(size: usize, n: usize, init: I, step: F, merge: M) -> S
where
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &[usize]) + Sync + Send,
    M: Fn(S, S) -> S + Sync + Send,
{
    if n == 0 {
        let mut s = init();
        step(&mut s, &[]);
        return s;
    }
    (0..size)
        .into_par_iter()
        .map(|first| {
            let mut state = init();
            let mut idx = vec![0usize; n];
            idx[0] = first;
            loop {
                step(&mut state, &idx);
                // odometer increment over coordinates 1..n
                let mut k = n - 1;
                loop {
                    if k == 0 {
                        return state;
                    }
                    idx[k] += 1;
                    if idx[k] < size {
                        break;
                    }
                    idx[k] = 0;
                    k -= 1;
                }
            }
        })
        .reduce(&init, &merge)
}

/// Counts `r(m) = |{a ∈ D : F(a) = m}|` over a tuple domain `D ⊆ Aⁿ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepCountMap {
    pub counts: BTreeMap<Rational, u64>,
    pub domain_size: u64,
}

impl RepCountMap {
    pub fn get(&self, m: &Rational) -> u64 {
        self.counts.get(m).copied().unwrap_or(0)
    }

    pub fn sup(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `Σ_m r(m)²`.
    pub fn energy(&self) -> u64 {
        self.counts.values().map(|r| r * r).sum()
    }

    pub fn image(&self) -> GroundSet {
        GroundSet::from_sorted_unique(self.counts.keys().cloned().collect())
    }

    pub(crate) fn from_hash(counts: HashMap<Rational, u64>, domain_size: u64) -> Self {
        RepCountMap {
            counts: counts.into_iter().collect(),
            domain_size,
        }
    }
}

impl Serialize for RepCountMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Shape<'a> {
            counts: Counts<'a>,
            domain_size: u64,
        }
        struct Counts<'a>(&'a BTreeMap<Rational, u64>);
        impl Serialize for Counts<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    map.serialize_entry(&k.to_string(), v)?;
                }
                map.end()
            }
        }
        Shape {
            counts: Counts(&self.counts),
            domain_size: self.domain_size,
        }
        .serialize(s)
    }
}

fn merge_counts(a: HashMap<Rational, u64>, b: HashMap<Rational, u64>) -> HashMap<Rational, u64> {
    let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    for (k, v) in small {
        *big.entry(k).or_insert(0) += v;
    }
    big
}

/// The value histogram of `F` over all of `Aⁿ`.
pub fn value_histogram(f: &SparsePoly, a: &GroundSet, budget: &Budget) -> Result<RepCountMap> {
    let n = f.nvars();
    let domain = budget.check_tuples("tuple enumeration", a.len(), n)?;
    let table = PowerTable::new(a, f.max_exponent());
    let terms: Vec<(Monomial, Rational)> = f
        .terms()
        .iter()
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    let counts = for_each_tuple(
        a.len(),
        n,
        HashMap::new,
        |acc: &mut HashMap<Rational, u64>, idx| {
            *acc.entry(table.value(&terms, idx)).or_insert(0) += 1;
        },
        merge_counts,
    );
    Ok(RepCountMap::from_hash(counts, domain))
}

/// `F(A, …, A)`.
pub fn image_set(f: &SparsePoly, a: &GroundSet, budget: &Budget) -> Result<GroundSet> {
    Ok(value_histogram(f, a, budget)?.image())
}

/// `|{a ∈ Aⁿ : F(a) = 0}|`.
pub fn zero_count(f: &SparsePoly, a: &GroundSet, budget: &Budget) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(value_histogram(f, a, budget)?.get(&Rational::zero()))
}

/// `E_F(A) = Σ_m r(m)²`, computed from the value histogram.
pub fn energy(f: &SparsePoly, a: &GroundSet, budget: &Budget) -> Result<u64> {
    Ok(value_histogram(f, a, budget)?.energy())
}
