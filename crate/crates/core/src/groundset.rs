use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

/// A finite set of rationals, deduplicated and sorted ascending.
///
/// Zero is allowed as an element; operations that live in the
/// multiplicative group call [`GroundSet::require_nonzero`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroundSet {
    elements: Vec<Rational>,
}

impl GroundSet {
    pub fn new(values: impl IntoIterator<Item = Rational>) -> Self {
        let set: BTreeSet<Rational> = values.into_iter().collect();
        GroundSet {
            elements: set.into_iter().collect(),
        }
    }

    pub(crate) fn from_sorted_unique(elements: Vec<Rational>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        GroundSet { elements }
    }

    pub fn from_ints(values: impl IntoIterator<Item = i64>) -> Self {
        Self::new(values.into_iter().map(crate::rational::int))
    }

    /// Parses either a JSON array (`["1/2", 3]`) or a comma-separated list.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('[') {
            return Ok(serde_json::from_str(trimmed)?);
        }
        if trimmed.is_empty() {
            return Ok(GroundSet::default());
        }
        let mut values = Vec::new();
        let mut offset = text.len() - text.trim_start().len();
        for piece in trimmed.split(',') {
            let value = parse_rational(piece).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + offset,
                    msg,
                },
                other => other,
            })?;
            values.push(value);
            offset += piece.len() + 1;
        }
        Ok(GroundSet::new(values))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elements.iter()
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.elements.binary_search(value).is_ok()
    }

    pub fn min(&self) -> Option<&Rational> {
        self.elements.first()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn require_nonzero(&self) -> Result<()> {
        if self.contains_zero() {
            Err(Error::ContainsZero)
        } else {
            Ok(())
        }
    }

    pub fn require_nonempty(&self, what: &'static str) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyOperand(what))
        } else {
            Ok(())
        }
    }

    pub fn is_subset(&self, other: &GroundSet) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &GroundSet) -> GroundSet {
        GroundSet::new(self.elements.iter().chain(&other.elements).cloned())
    }

    /// `{ f(a) : a ∈ A }`.
    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> GroundSet {
        GroundSet::new(self.elements.iter().map(f))
    }
}

impl<'a> IntoIterator for &'a GroundSet {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl FromIterator<Rational> for GroundSet {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        GroundSet::new(iter)
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for GroundSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::rational::vec_as_strings::serialize(&self.elements, s)
    }
}

impl<'de> Deserialize<'de> for GroundSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::rational::vec_as_strings::deserialize(d).map(GroundSet::new)
    }
}
