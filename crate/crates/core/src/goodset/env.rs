//! Good-set representation counts of a non-degenerate `F` set against the
//! multiplicative doubling and rank of `A`, compared with reference curves
//! of the form `c · 2^{⌊s·x⌋}`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{good_set_report, GoodSetReport};
use crate::budget::Budget;
use crate::degeneracy::{is_degenerate, span_dimension};
use crate::error::{Error, Result};
use crate::groundset::GroundSet;
use crate::multgroup::mult_rank;
use crate::poly::SparsePoly;
use crate::rational::{self, Rational};
use crate::setarith::{doubling, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveVariable {
    /// `K = |A·A| / |A|`.
    Doubling,
    /// Rank of the multiplicative group generated by `A`.
    Rank,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `sup_m r_{F,𝒢}(m)`.
    #[default]
    SupRep,
    /// Restricted energy divided by `|A|ⁿ`.
    EnergyRatio,
}

fn one() -> Rational {
    rational::int(1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceCurve {
    pub name: String,
    pub variable: CurveVariable,
    #[serde(default)]
    pub quantity: Quantity,
    #[serde(default = "one", with = "rational::as_string")]
    pub coefficient: Rational,
    #[serde(default = "one", with = "rational::as_string")]
    pub scale: Rational,
}

/// Largest power of two a curve may evaluate to.
const MAX_CURVE_EXPONENT: i64 = 1 << 16;

impl ReferenceCurve {
    pub fn evaluate(&self, x: &Rational) -> Result<Rational> {
        let e = (&self.scale * x).floor().to_integer();
        let e = i64::try_from(e)
            .ok()
            .filter(|e| e.abs() <= MAX_CURVE_EXPONENT)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("curve `{}` exponent too large", self.name))
            })?;
        Ok(&self.coefficient * rational::pow_int(&rational::int(2), e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvConfig {
    #[serde(default = "default_curves")]
    pub curves: Vec<ReferenceCurve>,
}

impl Default for EnvConfig {
    fn default() -> Self {
        EnvConfig {
            curves: default_curves(),
        }
    }
}

fn default_curves() -> Vec<ReferenceCurve> {
    vec![
        ReferenceCurve {
            name: "2^K".into(),
            variable: CurveVariable::Doubling,
            quantity: Quantity::SupRep,
            coefficient: one(),
            scale: one(),
        },
        ReferenceCurve {
            name: "2^r".into(),
            variable: CurveVariable::Rank,
            quantity: Quantity::SupRep,
            coefficient: one(),
            scale: one(),
        },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvVerdict {
    pub curve: String,
    pub variable: CurveVariable,
    pub quantity: Quantity,
    #[serde(with = "rational::as_string")]
    pub x: Rational,
    #[serde(with = "rational::as_string")]
    pub observed: Rational,
    #[serde(with = "rational::as_string")]
    pub reference: Rational,
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvReport {
    pub set_size: usize,
    #[serde(with = "rational::as_string")]
    pub doubling: Rational,
    pub mult_rank: usize,
    pub good_set: GoodSetReport,
    pub verdicts: Vec<EnvVerdict>,
}

/// Good-set statistics for a non-degenerate `F`, with one verdict row per
/// reference curve. Verdicts are observations only.
pub fn env_verify(
    f: &SparsePoly,
    a: &GroundSet,
    config: &EnvConfig,
    budget: &Budget,
) -> Result<EnvReport> {
    if is_degenerate(f)? {
        return Err(Error::Degenerate {
            rank: span_dimension(f)?,
            nvars: f.nvars(),
        });
    }
    a.require_nonempty("ground set")?;
    let good_set = good_set_report(f, a, budget)?;
    let k = doubling(a, Mode::Multiplicative, budget)?;
    let rank = mult_rank(a)?;
    let domain = Rational::from_integer(good_set.rep_counts.domain_size.into());
    let mut verdicts = Vec::with_capacity(config.curves.len());
    for curve in &config.curves {
        let x = match curve.variable {
            CurveVariable::Doubling => k.clone(),
            CurveVariable::Rank => rational::int(rank as i64),
        };
        let observed = match curve.quantity {
            Quantity::SupRep => Rational::from_integer(good_set.sup_rep.into()),
            Quantity::EnergyRatio if domain.is_zero() => Rational::zero(),
            Quantity::EnergyRatio => {
                Rational::from_integer(good_set.restricted_energy.into()) / &domain
            }
        };
        let reference = curve.evaluate(&x)?;
        verdicts.push(EnvVerdict {
            curve: curve.name.clone(),
            variable: curve.variable,
            quantity: curve.quantity,
            within: observed <= reference,
            x,
            observed,
            reference,
        });
    }
    Ok(EnvReport {
        set_size: a.len(),
        doubling: k,
        mult_rank: rank,
        good_set,
        verdicts,
    })
}
