//! Exact computations around polynomial images `F(A, …, A)` of finite sets of
//! rationals with small product set: degeneracy of `F`, sum/product set
//! arithmetic, multiplicative rank, good-set representation counts and the
//! standard extremal constructions.
//!
//! Everything is exact over ℚ. No floating point is used for any reported
//! quantity.

pub mod budget;
pub mod degeneracy;
pub mod error;
pub mod goodset;
pub mod groundset;
pub mod harness;
pub mod linalg;
pub mod multgroup;
pub mod poly;
pub mod rational;
pub mod setarith;

pub use budget::Budget;
pub use error::{Error, Result};
pub use groundset::GroundSet;
pub use linalg::{qrank, ExponentVector};
pub use poly::{parse_poly, SparsePoly};
pub use rational::{height, parse_rational, Rational};
