//! JSON encoding for arbitrary-precision integers: values that fit in 64
//! bits are plain numbers, larger ones are decimal strings.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int(v)
    }
}

impl From<&BigInt> for Int {
    fn from(v: &BigInt) -> Self {
        Int(v.clone())
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int(v.into())
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct IntVisitor;

impl<'de> Visitor<'de> for IntVisitor {
    type Value = Int;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
        Ok(Int(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
        Ok(Int(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
        v.parse::<BigInt>().map(Int).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

pub fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().map(Int::from).collect()
}

pub fn int_rows(v: &[Vec<BigInt>]) -> Vec<Vec<Int>> {
    v.iter().map(|r| ints(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_is_number_large_is_string() {
        assert_eq!(serde_json::to_string(&Int::from(-5)).unwrap(), "-5");
        let big = Int(BigInt::from(1u8) << 70);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(s, "\"1180591620717411303424\"");
        assert_eq!(serde_json::from_str::<Int>(&s).unwrap(), big);
        assert_eq!(serde_json::from_str::<Int>("42").unwrap(), Int::from(42));
        assert!(serde_json::from_str::<Int>("\"4x\"").is_err());
    }
}
