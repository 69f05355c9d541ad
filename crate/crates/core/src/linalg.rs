//! Exponent vectors and exact linear algebra over ℚ.

use std::fmt;
use std::ops::{Add, Index, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, common_denominator, Rational};

/// A vector in ℚⁿ. Its length is fixed at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(#[serde(with = "rational::vec_as_strings")] Vec<Rational>);

impl ExponentVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        ExponentVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints<I: Into<BigInt>>(entries: impl IntoIterator<Item = I>) -> Self {
        ExponentVector(
            entries
                .into_iter()
                .map(|e| Rational::from_integer(e.into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        ExponentVector(self.0.iter().map(|e| e * factor).collect())
    }

    /// Height `N(z) = max_i N(z_i)`.
    pub fn height(&self) -> BigInt {
        self.0
            .iter()
            .map(rational::height)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Entries as nonnegative integers, if they all are.
    pub fn to_natural(&self) -> Option<Vec<u32>> {
        self.0
            .iter()
            .map(|e| {
                if e.is_integer() {
                    u32::try_from(e.numer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Smallest positive integer multiple with integer entries, and that multiple.
    pub fn clear_denominators(&self) -> (BigInt, Vec<BigInt>) {
        let m = common_denominator(&self.0);
        let ints = self
            .0
            .iter()
            .map(|e| (e * Rational::from_integer(m.clone())).to_integer())
            .collect();
        (m, ints)
    }
}

impl Index<usize> for ExponentVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ExponentVector {
    type Output = ExponentVector;
    fn sub(self, rhs: &ExponentVector) -> ExponentVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

fn check_lengths(vectors: &[ExponentVector]) -> Result<usize> {
    let n = vectors.first().map_or(0, ExponentVector::len);
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    Ok(n)
}

/// Dimension of the ℚ-span of `vectors`. Empty input has rank 0.
pub fn qrank(vectors: &[ExponentVector]) -> Result<usize> {
    check_lengths(vectors)?;
    let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.clear_denominators().1).collect();
    Ok(integer_rank(rows))
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
///
/// Pivot for each column is the first remaining row with a nonzero entry.
pub fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for row in rest {
            let lead = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                // Exact division by the previous pivot (Sylvester identity).
                *x = (&pivot * &*x - &lead * p) / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Reduced row echelon form of the span of `vectors`: the nonzero rows and
/// their pivot columns, in increasing column order.
pub fn rref(vectors: &[ExponentVector]) -> Result<(Vec<Vec<Rational>>, Vec<usize>)> {
    let ncols = check_lengths(vectors)?;
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.0.clone()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for x in &mut rows[rank][col..] {
            *x = &*x * &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    Ok((rows, pivots))
}

/// Inverse of the square matrix whose rows are `rows`, or `SingularBasis`.
pub fn invert(rows: &[ExponentVector]) -> Result<Vec<Vec<Rational>>> {
    let n = rows.len();
    let width = check_lengths(rows)?;
    if width != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: width,
        });
    }
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.0.clone();
            row.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or(Error::SingularBasis)?;
        aug.swap(col, p);
        let inv = aug[col][col].recip();
        for x in &mut aug[col] {
            *x = &*x * &inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
