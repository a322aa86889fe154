use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Closed interval `[left, right]` with `left < right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    left: Rational,
    right: Rational,
}

impl Interval {
    pub fn new(left: Rational, right: Rational) -> Result<Self> {
        if left >= right {
            return Err(Error::InvalidInterval {
                left: rational::format(&left),
                right: rational::format(&right),
            });
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn contains(&self, p: &Rational) -> bool {
        &self.left <= p && p <= &self.right
    }

    /// Closed-interval intersection: touching endpoints count.
    pub fn intersects(&self, other: &Interval) -> bool {
        intersects(self, other)
    }

    /// True if `other` lies inside `self`.
    pub fn covers(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right <= self.right
    }
}

pub fn intersects(a: &Interval, b: &Interval) -> bool {
    a.left.clone().max(b.left.clone()) <= a.right.clone().min(b.right.clone())
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.left, self.right)
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    #[serde(with = "rational::serde_rational")]
    left: Rational,
    #[serde(with = "rational::serde_rational")]
    right: Rational,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IntervalRepr {
            left: self.left.clone(),
            right: self.right.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = IntervalRepr::deserialize(d)?;
        Interval::new(r.left, r.right).map_err(serde::de::Error::custom)
    }
}

/// A d-dimensional vector with every coordinate in `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|q| !rational::is_unit_range(q)) {
            return Err(Error::WeightOutOfRange {
                value: rational::format(bad),
            });
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(rational::format))
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coords = raw
            .iter()
            .map(|s| rational::parse(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        WeightVector::new(coords).map_err(serde::de::Error::custom)
    }
}

/// The k of the k-cardinality constraint. Serialized as an integer or `null`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinality {
    Finite(u32),
    Unbounded,
}

impl Cardinality {
    pub fn allows(self, count: usize) -> bool {
        match self {
            Cardinality::Finite(k) => count <= k as usize,
            Cardinality::Unbounded => true,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Cardinality::Finite(k) => Some(k),
            Cardinality::Unbounded => None,
        }
    }

    /// `floor(n / k)`, zero when unbounded.
    pub fn div_floor(self, n: usize) -> usize {
        self.finite().map_or(0, |k| n / k as usize)
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(k) => write!(f, "{k}"),
            Cardinality::Unbounded => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Cardinality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "unbounded" => Ok(Cardinality::Unbounded),
            _ => match s.parse::<u32>() {
                Ok(k) if k >= 1 => Ok(Cardinality::Finite(k)),
                _ => Err(Error::BadParameter(format!(
                    "k must be a positive integer or inf, got {s:?}"
                ))),
            },
        }
    }
}

impl Serialize for Cardinality {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cardinality::Finite(k) => s.serialize_u32(*k),
            Cardinality::Unbounded => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Cardinality {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Option::<u32>::deserialize(d)? {
            None => Ok(Cardinality::Unbounded),
            Some(0) => Err(serde::de::Error::custom("k must be positive")),
            Some(k) => Ok(Cardinality::Finite(k)),
        }
    }
}

/// Dimension `d` (0 = no weights) and cardinality bound `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConstraints {
    pub k: Cardinality,
    pub d: usize,
}

impl GameConstraints {
    pub fn new(d: usize, k: Cardinality) -> Self {
        Self { k, d }
    }

    /// Classic proper interval coloring.
    pub fn proper() -> Self {
        Self::new(0, Cardinality::Finite(1))
    }
}

/// One presented interval: the atomic game move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedInterval {
    pub id: usize,
    pub interval: Interval,
    pub weights: Option<WeightVector>,
    pub call_id: Option<usize>,
    pub eps_index: Option<u32>,
}

impl WeightedInterval {
    pub fn new(id: usize, interval: Interval, weights: Option<WeightVector>) -> Self {
        Self {
            id,
            interval,
            weights,
            call_id: None,
            eps_index: None,
        }
    }

    pub fn check_dimension(&self, c: &GameConstraints) -> Result<()> {
        let got = self.weights.as_ref().map_or(0, WeightVector::dim);
        if got != c.d || (c.d == 0 && self.weights.is_some()) {
            return Err(Error::DimensionMismatch { expected: c.d, got });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn iv(l: Rational, r: Rational) -> Interval {
        Interval::new(l, r).unwrap()
    }

    #[test]
    fn intersection_examples() {
        assert!(intersects(&iv(int(0), int(1)), &iv(int(1), int(2))));
        assert!(!intersects(&iv(int(0), int(1)), &iv(ratio(3, 2), ratio(5, 2))));
        assert!(intersects(
            &iv(ratio(7, 4), ratio(11, 4)),
            &iv(ratio(13, 8), ratio(21, 8))
        ));
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(int(1), int(1)).is_err());
        assert!(Interval::new(int(2), int(1)).is_err());
        assert_eq!(iv(ratio(1, 2), ratio(3, 2)).length(), int(1));
    }

    #[test]
    fn weights_must_be_unit_range() {
        assert!(WeightVector::new(vec![ratio(9, 8)]).is_err());
        assert!(WeightVector::new(vec![ratio(-1, 8)]).is_err());
        assert!(WeightVector::new(vec![int(0), int(1)]).is_ok());
    }

    #[test]
    fn cardinality_parse_and_serde() {
        assert_eq!("inf".parse::<Cardinality>().unwrap(), Cardinality::Unbounded);
        assert_eq!("4".parse::<Cardinality>().unwrap(), Cardinality::Finite(4));
        assert!("0".parse::<Cardinality>().is_err());
        let c = GameConstraints::new(16, Cardinality::Finite(4));
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"k":4,"d":16}"#);
        let u: GameConstraints = serde_json::from_str(r#"{"k":null,"d":2}"#).unwrap();
        assert_eq!(u.k, Cardinality::Unbounded);
    }

    #[test]
    fn interval_serde() {
        let i = iv(int(0), int(1));
        assert_eq!(serde_json::to_string(&i).unwrap(), r#"{"left":"0/1","right":"1/1"}"#);
        assert!(serde_json::from_str::<Interval>(r#"{"left":"1/1","right":"0/1"}"#).is_err());
    }
}
