//! Serde helpers: exact numbers are written as decimal strings.

use num_bigint::BigInt;
use serde::Serializer;

pub fn bigint_str<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}
