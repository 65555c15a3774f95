//! Connectivity values in `Z ∪ {-∞, +∞}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An integer extended by both infinities.
///
/// `+∞` means "no obstruction" (an equivalence, or a minimum over the empty
/// set); `-∞` means "no information". The derived order puts `NegInf` below
/// every finite value and `PosInf` above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtIntError {
    #[error("+inf and -inf cannot be added")]
    InfinityClash,
    #[error("finite arithmetic overflowed")]
    Overflow,
    #[error("cannot parse `{0}` as an extended integer")]
    Parse(String),
}

impl ExtInt {
    pub const ZERO: ExtInt = ExtInt::Fin(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Fin(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }

    pub fn checked_add(self, rhs: ExtInt) -> Result<ExtInt, ExtIntError> {
        use ExtInt::*;
        match (self, rhs) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(ExtIntError::InfinityClash),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Fin(a), Fin(b)) => a.checked_add(b).map(Fin).ok_or(ExtIntError::Overflow),
        }
    }

    pub fn checked_neg(self) -> Result<ExtInt, ExtIntError> {
        match self {
            ExtInt::NegInf => Ok(ExtInt::PosInf),
            ExtInt::PosInf => Ok(ExtInt::NegInf),
            ExtInt::Fin(v) => v
                .checked_neg()
                .map(ExtInt::Fin)
                .ok_or(ExtIntError::Overflow),
        }
    }

    pub fn checked_sub(self, rhs: ExtInt) -> Result<ExtInt, ExtIntError> {
        self.checked_add(rhs.checked_neg()?)
    }

    /// Adds a finite offset; never clashes.
    pub fn offset(self, by: i64) -> Result<ExtInt, ExtIntError> {
        self.checked_add(ExtInt::Fin(by))
    }

    /// `n`-fold sum `self + ... + self`; the empty sum is zero.
    pub fn times(self, n: usize) -> Result<ExtInt, ExtIntError> {
        if n == 0 {
            return Ok(ExtInt::ZERO);
        }
        match self {
            ExtInt::Fin(v) => i64::try_from(n)
                .ok()
                .and_then(|n| v.checked_mul(n))
                .map(ExtInt::Fin)
                .ok_or(ExtIntError::Overflow),
            inf => Ok(inf),
        }
    }

    /// Sum of a sequence, surfacing clashes.
    pub fn sum<I: IntoIterator<Item = ExtInt>>(it: I) -> Result<ExtInt, ExtIntError> {
        it.into_iter()
            .try_fold(ExtInt::ZERO, |acc, v| acc.checked_add(v))
    }

    /// Minimum of a sequence; the empty minimum is `+∞`.
    pub fn min_of<I: IntoIterator<Item = ExtInt>>(it: I) -> ExtInt {
        it.into_iter().min().unwrap_or(ExtInt::PosInf)
    }

    /// Maximum of a sequence; the empty maximum is `-∞`.
    pub fn max_of<I: IntoIterator<Item = ExtInt>>(it: I) -> ExtInt {
        it.into_iter().max().unwrap_or(ExtInt::NegInf)
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Fin(v)
    }
}

impl PartialEq<i64> for ExtInt {
    fn eq(&self, other: &i64) -> bool {
        *self == ExtInt::Fin(*other)
    }
}

impl PartialOrd<i64> for ExtInt {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&ExtInt::Fin(*other)))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::PosInf => f.write_str("inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for ExtInt {
    type Err = ExtIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "infinity" | "+infinity" | "∞" | "+∞" => Ok(ExtInt::PosInf),
            "-inf" | "-infinity" | "-∞" => Ok(ExtInt::NegInf),
            t => t
                .parse::<i64>()
                .map(ExtInt::Fin)
                .map_err(|_| ExtIntError::Parse(s.to_string())),
        }
    }
}

// JSON: finite values are numbers, infinities are the strings "inf" / "-inf".
impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtInt::Fin(v) => s.serialize_i64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ExtInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(ExtInt::Fin(v)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_infinities_at_the_ends() {
        assert!(ExtInt::NegInf < ExtInt::Fin(i64::MIN));
        assert!(ExtInt::Fin(i64::MAX) < ExtInt::PosInf);
        assert_eq!(ExtInt::min_of([]), ExtInt::PosInf);
        assert_eq!(ExtInt::max_of([]), ExtInt::NegInf);
    }

    #[test]
    fn opposite_infinities_clash() {
        assert_eq!(
            ExtInt::PosInf.checked_add(ExtInt::NegInf),
            Err(ExtIntError::InfinityClash)
        );
        assert_eq!(
            ExtInt::PosInf.checked_add(ExtInt::Fin(-3)),
            Ok(ExtInt::PosInf)
        );
        assert_eq!(ExtInt::PosInf.times(0), Ok(ExtInt::ZERO));
        assert_eq!(ExtInt::Fin(3).times(4), Ok(ExtInt::Fin(12)));
    }

    #[test]
    fn json_round_trip() {
        let v = vec![ExtInt::NegInf, ExtInt::Fin(-2), ExtInt::PosInf];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["-inf",-2,"inf"]"#);
        let back: Vec<ExtInt> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
