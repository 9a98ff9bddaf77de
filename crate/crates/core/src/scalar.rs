//! Scalar abstraction shared by every metric and interval computation.
//!
//! The checkers only ever need field arithmetic, a total-enough order and a
//! lossless textual form, so anything from `f64` to `BigRational` plugs in.
//! Verdict-relevant paths are meant to be run with an exact type.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{FromPrimitive, Num};

/// Numeric type usable for distances, breakpoints and interval endpoints.
pub trait Scalar:
    Num + FromPrimitive + Clone + PartialOrd + Debug + Display + FromStr + Send + Sync + 'static
{
    /// Parses `"p"` or `"p/q"`, independent of whether the type itself
    /// understands fractions.
    fn parse_scalar(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((num, den)) => {
                let num = Self::from_str(num.trim()).ok()?;
                let den = Self::from_str(den.trim()).ok()?;
                if den.is_zero() {
                    return None;
                }
                Some(num / den)
            }
            None => Self::from_str(text).ok(),
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("representable numerator")
            / Self::from_i64(den).expect("representable denominator")
    }

    fn is_negative_value(&self) -> bool {
        *self < Self::zero()
    }
}

impl<T> Scalar for T where
    T: Num + FromPrimitive + Clone + PartialOrd + Debug + Display + FromStr + Send + Sync + 'static
{
}

pub fn max_of<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

pub fn min_of<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// Serde adapter writing scalars as their display string (`"3/4"`).
pub mod as_string {
    use super::Scalar;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Scalar, S: Serializer>(value: &T, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(value)
    }

    pub fn deserialize<'de, T: Scalar, D: Deserializer<'de>>(de: D) -> Result<T, D::Error> {
        let text = String::deserialize(de)?;
        T::parse_scalar(&text).ok_or_else(|| D::Error::custom(format!("bad scalar {text:?}")))
    }
}

/// Serde adapter for vectors of scalars, each written as a string.
pub mod as_string_vec {
    use super::Scalar;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Scalar, S: Serializer>(values: &[T], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, T: Scalar, D: Deserializer<'de>>(de: D) -> Result<Vec<T>, D::Error> {
        Vec::<String>::deserialize(de)?
            .iter()
            .map(|t| T::parse_scalar(t).ok_or_else(|| D::Error::custom(format!("bad scalar {t:?}"))))
            .collect()
    }
}

/// Serde adapter writing big unsigned integers in decimal.
pub mod big_as_string {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(de)?;
        text.parse().map_err(|_| D::Error::custom(format!("bad integer {text:?}")))
    }
}
