use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ELEMENTS: u64 = 10_000_000;
pub const DEFAULT_MAX_TUPLES: u64 = 100_000_000;

/// Enumeration caps. Operations that would exceed them fail with
/// [`Error::BudgetExceeded`] instead of truncating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Largest set any operation may materialize.
    pub max_elements: u64,
    /// Largest number of tuples (or pairs) any single enumeration may visit.
    pub max_tuples: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_elements: DEFAULT_MAX_ELEMENTS,
            max_tuples: DEFAULT_MAX_TUPLES,
        }
    }
}

impl Budget {
    pub fn check_tuples(&self, what: &'static str, base: usize, power: usize) -> Result<u64> {
        let needed = (base as u128).checked_pow(power as u32);
        match needed {
            Some(v) if v <= self.max_tuples as u128 => Ok(v as u64),
            Some(v) => Err(Error::budget(what, v, self.max_tuples)),
            None => Err(Error::budget(
                what,
                format!("{base}^{power}"),
                self.max_tuples,
            )),
        }
    }

    pub fn check_elements(&self, what: &'static str, count: usize) -> Result<()> {
        if count as u64 > self.max_elements {
            Err(Error::budget(what, count, self.max_elements))
        } else {
            Ok(())
        }
    }
}
