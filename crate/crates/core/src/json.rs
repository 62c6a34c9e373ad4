//! Exact JSON encodings. Integers are emitted as JSON number literals of any
//! size (never floats), rationals as `[numerator, denominator]` pairs.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::qcalc::Rational;

/// A big integer that serializes as a bare JSON number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let number =
            serde_json::Number::from_str(&self.0.to_string()).map_err(serde::ser::Error::custom)?;
        number.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s,
            other => {
                return Err(D::Error::custom(format!(
                    "expected an integer, found {other}"
                )))
            }
        };
        BigInt::from_str(&text)
            .map(JsonInt)
            .map_err(|_| D::Error::custom(format!("expected an integer, found {text}")))
    }
}

/// `#[serde(with = "crate::json::rational")]` for a `Rational` field.
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        (
            JsonInt(value.numer().clone()),
            JsonInt(value.denom().clone()),
        )
            .serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let (n, d) = <(JsonInt, JsonInt)>::deserialize(deserializer)?;
        if d.0 == BigInt::from(0) {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rational::new(n.0, d.0))
    }
}

/// `#[serde(with = "crate::json::rational_vec")]` for a `Vec<Rational>` field.
pub mod rational_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wrapped(#[serde(with = "super::rational")] Rational);

    pub fn serialize<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(values.iter().map(|v| Wrapped(v.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Rational>, D::Error> {
        let wrapped = Vec::<Wrapped>::deserialize(deserializer)?;
        Ok(wrapped.into_iter().map(|w| w.0).collect())
    }
}
