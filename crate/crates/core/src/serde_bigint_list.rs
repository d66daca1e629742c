//! Serializes `BigInt` lists as JSON numbers where they fit, decimal strings otherwise.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_u64() {
            Some(u) => seq.serialize_element(&u)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Item {
    Num(u64),
    Str(String),
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    Vec::<Item>::deserialize(d)?
        .into_iter()
        .map(|i| match i {
            Item::Num(u) => Ok(BigInt::from(u)),
            Item::Str(s) => BigInt::from_str(&s).map_err(D::Error::custom),
        })
        .collect()
}
