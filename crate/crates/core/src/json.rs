// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact JSON encoding of big integers.
//!
//! Integers are written as bare JSON numbers of any length, never as strings or
//! floats, so every report can be parsed back without loss.

use std::fmt;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A [`BigInt`] that serializes as an exact JSON number.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JsonInt(pub BigInt);

impl From<BigInt> for JsonInt {
    fn from(v: BigInt) -> Self {
        JsonInt(v)
    }
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        JsonInt(v.clone())
    }
}

impl fmt::Display for JsonInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n: serde_json::Number = self.0.to_string().parse().map_err(S::Error::custom)?;
        n.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(deserializer)?;
        n.to_string()
            .parse::<BigInt>()
            .map(JsonInt)
            .map_err(|_| D::Error::custom(format!("expected an integer, found {n}")))
    }
}

pub fn triple(a: &BigInt, b: &BigInt, c: &BigInt) -> [JsonInt; 3] {
    [a.into(), b.into(), c.into()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_integers_stay_exact() {
        let v = JsonInt("-123456789012345678901234567890".parse().unwrap());
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "-123456789012345678901234567890");
        let back: JsonInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<JsonInt>("1.5").is_err());
        assert!(serde_json::from_str::<JsonInt>("\"7\"").is_err());
    }
}
