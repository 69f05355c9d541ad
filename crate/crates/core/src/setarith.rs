//! Sum sets, product sets and their iterates, plus constructive versions of
//! the covering and growth statements used for sets of small doubling.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groundset::GroundSet;
use crate::linalg::integer_rank;
use crate::rational::{self, Rational};

/// Which group law a set operation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Additive,
    Multiplicative,
}

impl Mode {
    fn apply(self, a: &Rational, b: &Rational) -> Rational {
        match self {
            Mode::Additive => a + b,
            Mode::Multiplicative => a * b,
        }
    }

    fn inverse(self, a: &Rational) -> Rational {
        match self {
            Mode::Additive => -a,
            Mode::Multiplicative => a.recip(),
        }
    }

    fn identity(self) -> Rational {
        match self {
            Mode::Additive => Rational::zero(),
            Mode::Multiplicative => Rational::one(),
        }
    }
}

const PARALLEL_PAIRS: usize = 1 << 14;

/// `{a ∘ b : a ∈ A, b ∈ B}` under `mode`, checked against `budget`.
pub fn combine(a: &GroundSet, b: &GroundSet, mode: Mode, budget: &Budget) -> Result<GroundSet> {
    a.require_nonempty("left operand")?;
    b.require_nonempty("right operand")?;
    budget.check_tuples("pairwise combination", a.len() * b.len(), 1)?;
    let values: HashSet<Rational> = if a.len() * b.len() >= PARALLEL_PAIRS {
        a.elements()
            .par_iter()
            .fold(HashSet::new, |mut acc, x| {
                acc.extend(b.iter().map(|y| mode.apply(x, y)));
                acc
            })
            .reduce(HashSet::new, |mut l, r| {
                if l.len() < r.len() {
                    return merge(r, l);
                }
                l.extend(r);
                l
            })
    } else {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| mode.apply(x, y)))
            .collect()
    };
    budget.check_elements("combined set", values.len())?;
    let mut sorted: Vec<Rational> = values.into_iter().collect();
    sorted.sort_unstable();
    Ok(GroundSet::from_sorted_unique(sorted))
}

fn merge(mut big: HashSet<Rational>, small: HashSet<Rational>) -> HashSet<Rational> {
    big.extend(small);
    big
}

pub fn sumset(a: &GroundSet, b: &GroundSet) -> Result<GroundSet> {
    combine(a, b, Mode::Additive, &Budget::default())
}

pub fn productset(a: &GroundSet, b: &GroundSet) -> Result<GroundSet> {
    combine(a, b, Mode::Multiplicative, &Budget::default())
}

/// `A − B`.
pub fn difference_set(a: &GroundSet, b: &GroundSet, budget: &Budget) -> Result<GroundSet> {
    combine(a, &b.map(|x| -x), Mode::Additive, budget)
}

/// `kA` or `A^(k)`, deduplicating after every convolution step.
pub fn iterated(a: &GroundSet, k: usize, mode: Mode, budget: &Budget) -> Result<GroundSet> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "iteration count must be at least 1".into(),
        ));
    }
    a.require_nonempty("iterated set")?;
    let mut acc = a.clone();
    for _ in 1..k {
        acc = combine(&acc, a, mode, budget)?;
    }
    Ok(acc)
}

fn iterated_or_identity(a: &GroundSet, k: usize, mode: Mode, budget: &Budget) -> Result<GroundSet> {
    if k == 0 {
        Ok(GroundSet::new([mode.identity()]))
    } else {
        iterated(a, k, mode, budget)
    }
}

/// Size and the two doubling ratios of a set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetStats {
    pub size: usize,
    #[serde(with = "rational::as_string")]
    pub add_doubling: Rational,
    #[serde(with = "rational::as_string")]
    pub mult_doubling: Rational,
}

impl SetStats {
    pub fn of(a: &GroundSet, budget: &Budget) -> Result<SetStats> {
        a.require_nonempty("set statistics")?;
        let n = Rational::from_integer(a.len().into());
        let plus = combine(a, a, Mode::Additive, budget)?.len();
        let times = combine(a, a, Mode::Multiplicative, budget)?.len();
        Ok(SetStats {
            size: a.len(),
            add_doubling: Rational::from_integer(plus.into()) / &n,
            mult_doubling: Rational::from_integer(times.into()) / n,
        })
    }
}

/// `|A∘A| / |A|`.
pub fn doubling(a: &GroundSet, mode: Mode, budget: &Budget) -> Result<Rational> {
    let doubled = combine(a, a, mode, budget)?;
    Ok(Rational::new(doubled.len().into(), a.len().into()))
}

/// `kA − lA` together with the Plünnecke–Ruzsa bound `K^{k+l}|A|`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixedSumset {
    pub set: GroundSet,
    /// Additive doubling `|A+A| / |A|`.
    #[serde(with = "rational::as_string")]
    pub doubling: Rational,
    #[serde(with = "rational::as_string")]
    pub bound: Rational,
    pub within_bound: bool,
}

pub fn mixed_sumset(a: &GroundSet, k: usize, l: usize, budget: &Budget) -> Result<MixedSumset> {
    if k + l == 0 {
        return Err(Error::InvalidArgument("need k + l ≥ 1".into()));
    }
    a.require_nonempty("mixed sumset")?;
    let plus = iterated_or_identity(a, k, Mode::Additive, budget)?;
    let minus = iterated_or_identity(a, l, Mode::Additive, budget)?;
    let set = difference_set(&plus, &minus, budget)?;
    let doubling = doubling(a, Mode::Additive, budget)?;
    let bound =
        rational::pow_int(&doubling, (k + l) as i64) * Rational::from_integer(a.len().into());
    let within_bound = Rational::from_integer(set.len().into()) <= bound;
    Ok(MixedSumset {
        set,
        doubling,
        bound,
        within_bound,
    })
}

/// Greedy Ruzsa covering: a maximal `X ⊆ B` whose translates `x∘A` are
/// pairwise disjoint. Every `b ∈ B` then lies in `X∘A∘A⁻¹`.
pub fn ruzsa_cover(a: &GroundSet, b: &GroundSet, mode: Mode) -> Result<GroundSet> {
    a.require_nonempty("covering set")?;
    if mode == Mode::Multiplicative {
        a.require_nonzero()?;
        b.require_nonzero()?;
    }
    let mut occupied: HashSet<Rational> = HashSet::new();
    let mut chosen = Vec::new();
    for x in b {
        let translate: Vec<Rational> = a.iter().map(|y| mode.apply(x, y)).collect();
        if translate.iter().all(|t| !occupied.contains(t)) {
            occupied.extend(translate);
            chosen.push(x.clone());
        }
    }
    Ok(GroundSet::from_sorted_unique(chosen))
}

/// Checks `B ⊆ X∘A∘A⁻¹` and `|X|·|A| ≤ |A∘B|`.
pub fn verify_cover(x: &GroundSet, a: &GroundSet, b: &GroundSet, mode: Mode) -> Result<bool> {
    if b.is_empty() {
        return Ok(x.is_empty());
    }
    if x.is_empty() {
        return Ok(false);
    }
    let budget = Budget::default();
    let a_inv = a.map(|v| mode.inverse(v));
    let spread = combine(&combine(x, a, mode, &budget)?, &a_inv, mode, &budget)?;
    let ab = combine(a, b, mode, &budget)?;
    Ok(b.is_subset(&spread) && x.len() * a.len() <= ab.len())
}

/// Growth of the dyadic product sets `A^(2^i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicProfile {
    /// `|A^(2^i)|` for `i = 0..=l`.
    pub sizes: Vec<usize>,
    /// `|A^(2^{i+1})| / |A^(2^i)|` for `i = 0..l`.
    #[serde(with = "rational::vec_as_strings")]
    pub ratios: Vec<Rational>,
    /// First index attaining the smallest ratio.
    pub argmin: usize,
}

pub fn dyadic_profile(a: &GroundSet, l: usize, budget: &Budget) -> Result<DyadicProfile> {
    if l == 0 {
        return Err(Error::InvalidArgument(
            "dyadic depth must be at least 1".into(),
        ));
    }
    a.require_nonempty("dyadic profile")?;
    a.require_nonzero()?;
    let mut current = a.clone();
    let mut sizes = vec![current.len()];
    let mut ratios = Vec::with_capacity(l);
    for _ in 0..l {
        let next = combine(&current, &current, Mode::Multiplicative, budget)?;
        ratios.push(Rational::new(next.len().into(), current.len().into()));
        sizes.push(next.len());
        current = next;
    }
    let argmin = ratios
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.cmp(y.1).then(x.0.cmp(&y.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(DyadicProfile {
        sizes,
        ratios,
        argmin,
    })
}

/// A finite set of integer points of a common dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePointSet {
    dim: usize,
    points: Vec<Vec<i64>>,
}

impl LatticePointSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        let mut pts = Vec::new();
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            pts.push(p);
        }
        pts.sort();
        pts.dedup();
        Ok(LatticePointSet { dim, points: pts })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        let Some(base) = self.points.first() else {
            return 0;
        };
        let diffs = self.points[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(base)
                    .map(|(x, y)| BigInt::from(x - y))
                    .collect()
            })
            .collect();
        integer_rank(diffs)
    }

    pub fn doubled_size(&self) -> usize {
        let mut sums = HashSet::new();
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i..] {
                sums.insert(p.iter().zip(q).map(|(x, y)| x + y).collect::<Vec<i64>>());
            }
        }
        sums.len()
    }
}

/// Outcome of checking `|X+X| ≥ (r+1)|X| − r(r+1)/2` in the affine hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreimanCheck {
    pub affine_dim: usize,
    pub lhs: usize,
    #[serde(with = "rational::as_string")]
    pub rhs: Rational,
    pub holds: bool,
}

pub fn freiman_lemma_check(x: &LatticePointSet) -> Result<FreimanCheck> {
    if x.is_empty() {
        return Err(Error::EmptyOperand("lattice point set"));
    }
    let r = x.affine_dim();
    let lhs = x.doubled_size();
    let r_big = BigInt::from(r);
    let rhs =
        Rational::from_integer((&r_big + 1) * BigInt::from(x.len()) - &r_big * (&r_big + 1) / 2);
    let holds = Rational::from_integer(lhs.into()) >= rhs;
    Ok(FreimanCheck {
        affine_dim: r,
        lhs,
        rhs,
        holds,
    })
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
    fn sumset_examples() {
        assert_eq!(
            sumset(&set(&[1, 2]), &set(&[1, 2])).unwrap(),
            set(&[2, 3, 4])
        );
        let a = set(&[3, 7, -1]);
        assert_eq!(sumset(&a, &set(&[0])).unwrap(), a);
        assert_eq!(
            sumset(&set(&[1, 2, 4]), &set(&[1, 2, 4])).unwrap(),
            set(&[2, 3, 4, 5, 6, 8])
        );
        assert!(matches!(
            sumset(&set(&[]), &set(&[1])),
            Err(Error::EmptyOperand(_))
        ));
    }

    #[test]
    fn productset_examples() {
        let gp = productset(&set(&[2, 4, 8]), &set(&[2, 4, 8])).unwrap();
        assert_eq!(gp, set(&[4, 8, 16, 32, 64]));
        let a = set(&[5, -3]);
        assert_eq!(productset(&a, &set(&[1])).unwrap(), a);
        assert_eq!(
            productset(&set(&[1, 2, 3]), &set(&[1, 2, 3])).unwrap(),
            set(&[1, 2, 3, 4, 6, 9])
        );
    }

    #[test]
    fn iterated_examples() {
        let b = Budget::default();
        assert_eq!(
            iterated(&set(&[2, 4]), 2, Mode::Multiplicative, &b).unwrap(),
            set(&[4, 8, 16])
        );
        assert_eq!(
            iterated(&set(&[2, 4]), 1, Mode::Multiplicative, &b).unwrap(),
            set(&[2, 4])
        );
        assert_eq!(
            iterated(&set(&[2, 3]), 3, Mode::Multiplicative, &b).unwrap(),
            set(&[8, 12, 18, 27])
        );
        assert!(iterated(&set(&[2]), 0, Mode::Additive, &b).is_err());
    }

    #[test]
    fn iterated_respects_element_cap() {
        let tight = Budget {
            max_elements: 10,
            max_tuples: 1_000,
        };
        let a = set(&[1, 10, 100, 1000]);
        assert!(matches!(
            iterated(&a, 3, Mode::Additive, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn mixed_sumset_examples() {
        let b = Budget::default();
        // 2A = {0,1,2}, so 2A − A = {−1,…,2}.
        let m = mixed_sumset(&set(&[0, 1]), 2, 1, &b).unwrap();
        assert_eq!(m.set, set(&[-1, 0, 1, 2]));
        assert_eq!(m.bound, ratio(27, 4));
        assert!(m.within_bound);

        let single = mixed_sumset(&set(&[5]), 3, 2, &b).unwrap();
        assert_eq!(single.set.len(), 1);
        assert_eq!(single.bound, int(1));

        let m = mixed_sumset(&set(&[0, 1, 2]), 2, 0, &b).unwrap();
        assert_eq!(m.set.len(), 5);
        assert_eq!(m.bound, ratio(25, 3));

        assert!(mixed_sumset(&set(&[1]), 0, 0, &b).is_err());
    }

    #[test]
    fn ruzsa_cover_examples() {
        let x = ruzsa_cover(&set(&[0, 1]), &set(&[0, 1]), Mode::Additive).unwrap();
        assert_eq!(x, set(&[0]));
        let x = ruzsa_cover(&set(&[0, 1]), &set(&[5]), Mode::Additive).unwrap();
        assert_eq!(x, set(&[5]));
        let a = set(&[0, 1, 2]);
        let b = set(&[0, 1, 2, 3, 4]);
        let x = ruzsa_cover(&a, &b, Mode::Additive).unwrap();
        // Greedy in ascending order keeps 0, skips 1 and 2, keeps 3, skips 4.
        assert_eq!(x, set(&[0, 3]));
        assert!(verify_cover(&x, &a, &b, Mode::Additive).unwrap());
    }

    #[test]
    fn multiplicative_cover() {
        let a = set(&[1, 2, 4]);
        let b = set(&[1, 2, 3, 5, 8, 16, 64]);
        let x = ruzsa_cover(&a, &b, Mode::Multiplicative).unwrap();
        assert!(verify_cover(&x, &a, &b, Mode::Multiplicative).unwrap());
        assert!(ruzsa_cover(&set(&[0, 1]), &b, Mode::Multiplicative).is_err());
    }

    #[test]
    fn dyadic_examples() {
        let b = Budget::default();
        let p = dyadic_profile(&set(&[2, 4]), 2, &b).unwrap();
        assert_eq!(p.sizes, vec![2, 3, 5]);
        assert_eq!(p.ratios, vec![ratio(3, 2), ratio(5, 3)]);
        assert_eq!(p.argmin, 0);
        let p = dyadic_profile(&set(&[2, 3]), 2, &b).unwrap();
        assert_eq!(p.sizes, vec![2, 3, 5]);
        let p = dyadic_profile(&set(&[1]), 4, &b).unwrap();
        assert!(p.ratios.iter().all(|r| *r == int(1)));
        let tight = Budget {
            max_elements: 4,
            max_tuples: 1_000,
        };
        assert!(matches!(
            dyadic_profile(&set(&[2, 3]), 3, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn freiman_examples() {
        let tri = LatticePointSet::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let c = freiman_lemma_check(&tri).unwrap();
        assert_eq!((c.affine_dim, c.lhs), (2, 6));
        assert_eq!(c.rhs, int(6));
        assert!(c.holds);

        let seg = LatticePointSet::new(1, vec![vec![0], vec![1]]).unwrap();
        let c = freiman_lemma_check(&seg).unwrap();
        assert_eq!((c.lhs, c.rhs.clone()), (3, int(3)));

        let line = LatticePointSet::new(2, vec![vec![0, 0], vec![1, 0], vec![2, 0]]).unwrap();
        let c = freiman_lemma_check(&line).unwrap();
        assert_eq!((c.affine_dim, c.lhs), (1, 5));
        assert_eq!(c.rhs, int(5));
    }

    fn small_set() -> impl Strategy<Value = GroundSet> {
        prop::collection::vec((-20i64..21, 1i64..4), 1..12)
            .prop_map(|v| GroundSet::new(v.into_iter().map(|(p, q)| ratio(p, q))))
    }

    proptest! {
        #[test]
        fn operations_commute(a in small_set(), b in small_set()) {
            prop_assert_eq!(sumset(&a, &b).unwrap(), sumset(&b, &a).unwrap());
            prop_assert_eq!(productset(&a, &b).unwrap(), productset(&b, &a).unwrap());
            let s = sumset(&a, &b).unwrap();
            prop_assert!(s.len() >= a.len().max(b.len()));
        }

        #[test]
        fn squaring_matches_productset(a in small_set()) {
            let b = Budget::default();
            prop_assert_eq!(
                iterated(&a, 2, Mode::Multiplicative, &b).unwrap(),
                productset(&a, &a).unwrap()
            );
        }

        #[test]
        fn plunnecke_ruzsa_holds(a in small_set(), k in 0usize..4, l in 0usize..4) {
            prop_assume!(k + l >= 1);
            let m = mixed_sumset(&a, k, l, &Budget::default()).unwrap();
            prop_assert!(m.within_bound);
        }

        #[test]
        fn cover_contains_target(a in small_set(), b in small_set()) {
            for mode in [Mode::Additive, Mode::Multiplicative] {
                if mode == Mode::Multiplicative && (a.contains_zero() || b.contains_zero()) {
                    continue;
                }
                let x = ruzsa_cover(&a, &b, mode).unwrap();
                prop_assert!(x.is_subset(&b));
                prop_assert!(verify_cover(&x, &a, &b, mode).unwrap());
            }
        }

        #[test]
        fn freiman_lemma_always_holds(
            dim in 1usize..5,
            raw in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 1..30),
        ) {
            let x = LatticePointSet::new(dim, raw.into_iter().map(|p| p[..dim].to_vec())).unwrap();
            let c = freiman_lemma_check(&x).unwrap();
            prop_assert!(c.affine_dim <= dim);
            prop_assert!(c.holds);
        }

        #[test]
        fn doubling_is_at_least_one(a in small_set()) {
            let stats = SetStats::of(&a, &Budget::default()).unwrap();
            let n = a.len() as i64;
            prop_assert!(stats.add_doubling >= int(2) - ratio(1, n));
            prop_assert!(stats.mult_doubling >= int(1));
        }
    }
}
