//! Degenerate polynomials.
//!
//! `F` in `n` variables is degenerate when `F = P(x^{v_1}, …, x^{v_{n-1}})`
//! for some `P` and rational vectors `v_j`. This happens exactly when the
//! exponent support of `F` spans a subspace of dimension at most `n − 1`,
//! and the decomposition can be read off from that subspace:
//!
//! 1. Row-reduce the support. Its pivot columns form a coordinate set on
//!    which the span projects bijectively.
//! 2. Pad the pivot set with further coordinates (adding the matching unit
//!    vectors to the span) until it has `n − 1` elements. The one coordinate
//!    left out, `c`, is a linear function of the others on the padded span:
//!    `u_c = Σ β_j u_j`.
//! 3. `v_j = e_j + β_j e_c` for each `j ≠ c`, and a support vector `u` is
//!    `Σ_{j≠c} u_j v_j`, so `P` has the monomial `Π y_j^{u_j}` for it.
//!
//! When `d(F) < n − 1` several choices of `c` work. The largest non-pivot
//! coordinate is used, which makes the retained coordinate set
//! lexicographically least; other valid decompositions exist.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groundset::GroundSet;
use crate::linalg::{qrank, rref, ExponentVector};
use crate::poly::{image_set, SparsePoly};
use crate::rational::{self, Rational};
use crate::setarith::{combine, doubling, Mode};

/// The exponent support `ℐ_F`, including the zero vector for a constant term.
pub fn support(f: &SparsePoly) -> Result<Vec<ExponentVector>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.support_vectors())
}

/// `d(F)`: dimension of the ℚ-span of the exponent support.
pub fn span_dimension(f: &SparsePoly) -> Result<usize> {
    qrank(&support(f)?)
}

pub fn is_degenerate(f: &SparsePoly) -> Result<bool> {
    Ok(span_dimension(f)? < f.nvars())
}

/// `F = P(x^{v_1}, …, x^{v_{n-1}})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    /// `v_1, …, v_{n-1}` in the original coordinates.
    pub vectors: Vec<ExponentVector>,
    /// `P`, in `n − 1` variables; `y_j` is written `x_j`.
    #[serde(rename = "outer_poly")]
    pub outer: SparsePoly,
    /// The retained coordinates in order, followed by the dependent one.
    #[serde(rename = "permutation")]
    pub coordinate_permutation: Vec<usize>,
}

impl Decomposition {
    pub fn dependent_coordinate(&self) -> usize {
        *self
            .coordinate_permutation
            .last()
            .expect("permutation covers at least one coordinate")
    }

    /// Formal re-expansion of `P(x^{v_1}, …)`.
    pub fn expand(&self) -> Result<SparsePoly> {
        expand_composition(
            &self.outer,
            &self.vectors,
            self.coordinate_permutation.len(),
        )
    }
}

/// Expands `P(x^{v_1}, …, x^{v_k})` in `nvars` variables by exponent
/// arithmetic. Fails if some resulting monomial has an exponent that is
/// not a nonnegative integer.
pub fn expand_composition(
    outer: &SparsePoly,
    vectors: &[ExponentVector],
    nvars: usize,
) -> Result<SparsePoly> {
    if outer.nvars() != vectors.len() {
        return Err(Error::DimensionMismatch {
            expected: vectors.len(),
            found: outer.nvars(),
        });
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != nvars) {
        return Err(Error::DimensionMismatch {
            expected: nvars,
            found: v.len(),
        });
    }
    let mut terms = Vec::with_capacity(outer.num_terms());
    for (alpha, c) in outer.terms() {
        let mut exp = ExponentVector::zeros(nvars);
        for (k, v) in alpha.iter().zip(vectors) {
            if *k > 0 {
                exp = &exp + &v.scale(&Rational::from_integer(BigInt::from(*k)));
            }
        }
        let natural = exp.to_natural().ok_or_else(|| {
            Error::InvariantViolation(format!("expansion produced non-integral exponent {exp}"))
        })?;
        terms.push((natural, c.clone()));
    }
    Ok(SparsePoly::from_terms(nvars, terms))
}

pub fn decompose(f: &SparsePoly) -> Result<Decomposition> {
    let n = f.nvars();
    let supp = support(f)?;
    let (rows, pivots) = rref(&supp)?;
    if pivots.len() >= n {
        return Err(Error::NonDegenerate(n));
    }
    let dependent = (0..n)
        .rev()
        .find(|c| !pivots.contains(c))
        .expect("rank below n leaves a free column");

    // β_j for every retained coordinate j: the RREF row entry in the dependent
    // column for pivots, zero for padding coordinates.
    let mut beta = vec![Rational::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        beta[p] = row[dependent].clone();
    }
    let retained: Vec<usize> = (0..n).filter(|&j| j != dependent).collect();
    let vectors: Vec<ExponentVector> = retained
        .iter()
        .map(|&j| {
            let mut v = ExponentVector::unit(n, j).entries().to_vec();
            v[dependent] = beta[j].clone();
            ExponentVector::new(v)
        })
        .collect();

    let outer_terms = f.terms().iter().map(|(u, c)| {
        let alpha: Vec<u32> = retained.iter().map(|&j| u[j]).collect();
        (alpha, c.clone())
    });
    let outer = SparsePoly::from_terms(n - 1, outer_terms);

    let mut coordinate_permutation = retained;
    coordinate_permutation.push(dependent);
    let dec = Decomposition {
        vectors,
        outer,
        coordinate_permutation,
    };
    let back = dec.expand()?;
    assert_eq!(&back, f, "decomposition must re-expand to the input");
    Ok(dec)
}

/// One factor `M_j · |Z_j|` of the degenerate image bound.
#[derive(Clone, Debug, Serialize)]
pub struct BoundFactor {
    pub vector: ExponentVector,
    /// Common denominator `M_j` of `v_j`.
    #[serde(serialize_with = "ser_bigint")]
    pub root_index: BigInt,
    /// `r_i = M_j · v_{j,i}`.
    #[serde(serialize_with = "ser_bigints")]
    pub integer_exponents: Vec<BigInt>,
    /// `|Z_j|`, `Z_j = {Π a_i^{r_i}}`.
    pub z_size: usize,
    #[serde(serialize_with = "ser_bigint")]
    pub factor: BigInt,
    /// `Σ|r_i|`.
    #[serde(serialize_with = "ser_bigint")]
    pub growth_exponent: BigInt,
    /// `K^{Σ|r_i|}·|A|` with `K = |A·A|/|A|`.
    #[serde(with = "rational::as_string")]
    pub plunnecke_bound: Rational,
    pub plunnecke_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegenerateImageBound {
    pub decomposition: Decomposition,
    pub measured: usize,
    pub factors: Vec<BoundFactor>,
    #[serde(serialize_with = "ser_bigint")]
    pub product_bound: BigInt,
    pub within_bound: bool,
    #[serde(with = "rational::as_string")]
    pub mult_doubling: Rational,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// `{a^r : a ∈ A}`.
fn pointwise_power(a: &GroundSet, r: &BigInt) -> Result<GroundSet> {
    let mut out = Vec::with_capacity(a.len());
    for x in a {
        out.push(rational::pow_bigint(x, r).ok_or_else(|| {
            Error::InvalidArgument(format!("exponent {r} too large to evaluate"))
        })?);
    }
    Ok(GroundSet::new(out))
}

/// Measures `|F(A,…,A)|` for degenerate `F` and checks it against
/// `Π_j M_j |Z_j|`, reporting the Plünnecke–Ruzsa bound on each `|Z_j|`.
pub fn degenerate_image_bound(
    f: &SparsePoly,
    a: &GroundSet,
    budget: &Budget,
) -> Result<DegenerateImageBound> {
    a.require_nonempty("ground set")?;
    a.require_nonzero()?;
    let decomposition = decompose(f)?;
    let measured = image_set(f, a, budget)?.len();
    let k = doubling(a, Mode::Multiplicative, budget)?;
    let size = Rational::from_integer(a.len().into());

    let mut factors = Vec::with_capacity(decomposition.vectors.len());
    let mut product_bound = BigInt::one();
    for v in &decomposition.vectors {
        let (m, r) = v.clear_denominators();
        let mut z = GroundSet::new([Rational::one()]);
        for ri in r.iter().filter(|ri| !ri.is_zero()) {
            z = combine(&z, &pointwise_power(a, ri)?, Mode::Multiplicative, budget)?;
        }
        let growth: BigInt = r.iter().map(|x| x.abs()).sum();
        let plunnecke_bound = rational::pow_bigint(&k, &growth)
            .ok_or_else(|| Error::InvalidArgument("growth exponent too large".into()))?
            * &size;
        let factor = &m * BigInt::from(z.len());
        product_bound *= &factor;
        factors.push(BoundFactor {
            vector: v.clone(),
            root_index: m,
            integer_exponents: r,
            z_size: z.len(),
            factor,
            growth_exponent: growth,
            plunnecke_ok: Rational::from_integer(z.len().into()) <= plunnecke_bound,
            plunnecke_bound,
        });
    }
    let within_bound = BigInt::from(measured) <= product_bound;
    Ok(DegenerateImageBound {
        decomposition,
        measured,
        factors,
        product_bound,
        within_bound,
        mult_doubling: k,
    })
}
