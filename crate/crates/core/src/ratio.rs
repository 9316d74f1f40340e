//! Exact rational arithmetic for distance values.
//!
//! Distances are compared, never approximated: every value is either a
//! reduced fraction or the single point at infinity, and the order is total.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// A reduced rational number with a positive denominator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    /// Builds `num/den` in reduced form. Panics if `den == 0`; all callers
    /// construct denominators from set cardinalities or validated input.
    pub fn new(num: i64, den: i64) -> Ratio {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den);
        if g == 0 {
            return Ratio { num: 0, den: 1 };
        }
        Ratio {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn from_int(n: i64) -> Ratio {
        Ratio { num: n, den: 1 }
    }

    pub fn zero() -> Ratio {
        Ratio::from_int(0)
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn add(&self, other: &Ratio) -> Ratio {
        // i128 intermediates keep tiny desk-scale values well clear of overflow
        let num = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        let den = self.den as i128 * other.den as i128;
        let g = gcd128(num, den);
        Ratio {
            num: (num / g) as i64,
            den: (den / g) as i64,
        }
    }
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    if a == 0 {
        1
    } else {
        a
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Ratio) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Ratio) -> Ordering {
        // cross-multiply in i128: denominators are positive
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A distance: a finite rational or the top element `inf`.
///
/// The order is total, with every finite value below infinity. Distances are
/// printed exactly (`p/q` or `inf`), never as floating point.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum DistanceValue {
    Finite(Ratio),
    Infinity,
}

impl DistanceValue {
    pub fn finite(num: i64, den: i64) -> DistanceValue {
        DistanceValue::Finite(Ratio::new(num, den))
    }

    pub fn int(n: i64) -> DistanceValue {
        DistanceValue::Finite(Ratio::from_int(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, DistanceValue::Finite(_))
    }
}

impl PartialOrd for DistanceValue {
    fn partial_cmp(&self, other: &DistanceValue) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DistanceValue {
    fn cmp(&self, other: &DistanceValue) -> Ordering {
        use DistanceValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => Ordering::Less,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Infinity, Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceValue::Finite(r) => write!(f, "{}", r),
            DistanceValue::Infinity => write!(f, "inf"),
        }
    }
}

/// Error parsing a distance literal such as `3`, `-1/2`, or `inf`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid distance literal `{0}`")]
pub struct ParseDistanceError(pub String);

impl FromStr for DistanceValue {
    type Err = ParseDistanceError;

    fn from_str(s: &str) -> Result<DistanceValue, ParseDistanceError> {
        let s = s.trim();
        if s == "inf" {
            return Ok(DistanceValue::Infinity);
        }
        let bad = || ParseDistanceError(s.to_string());
        match s.split_once('/') {
            None => {
                let num: i64 = s.parse().map_err(|_| bad())?;
                Ok(DistanceValue::int(num))
            }
            Some((n, d)) => {
                let num: i64 = n.trim().parse().map_err(|_| bad())?;
                let den: i64 = d.trim().parse().map_err(|_| bad())?;
                if den <= 0 {
                    return Err(bad());
                }
                Ok(DistanceValue::finite(num, den))
            }
        }
    }
}

impl Serialize for DistanceValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DistanceValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<DistanceValue, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_is_canonical() {
        assert_eq!(Ratio::new(2, 4), Ratio::new(1, 2));
        assert_eq!(Ratio::new(-2, -4), Ratio::new(1, 2));
        assert_eq!(Ratio::new(2, -4), Ratio::new(-1, 2));
        assert_eq!(Ratio::new(0, -7), Ratio::zero());
    }

    #[test]
    fn order_and_infinity() {
        let third = DistanceValue::finite(1, 3);
        let four_thirds = DistanceValue::finite(4, 3);
        let neg = DistanceValue::int(-2);
        assert!(neg < third);
        assert!(third < four_thirds);
        assert!(four_thirds < DistanceValue::Infinity);
        assert_eq!(DistanceValue::Infinity, DistanceValue::Infinity);
    }

    #[test]
    fn display_and_parse_round_trip() {
        for v in [
            DistanceValue::int(0),
            DistanceValue::int(-5),
            DistanceValue::finite(4, 3),
            DistanceValue::finite(-7, 2),
            DistanceValue::Infinity,
        ] {
            let text = v.to_string();
            assert_eq!(text.parse::<DistanceValue>().unwrap(), v);
        }
        assert_eq!("8/3".parse::<DistanceValue>().unwrap(), DistanceValue::finite(8, 3));
        assert!("1/0".parse::<DistanceValue>().is_err());
        assert!("1.5".parse::<DistanceValue>().is_err());
    }

    #[test]
    fn addition() {
        let a = Ratio::new(1, 3);
        let b = Ratio::from_int(1);
        assert_eq!(a.add(&b), Ratio::new(4, 3));
        assert_eq!(Ratio::new(1, 6).add(&Ratio::new(1, 3)), Ratio::new(1, 2));
    }
}
