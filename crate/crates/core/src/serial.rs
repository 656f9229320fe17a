//! `serialize_with` helpers giving stable, string-based JSON for big integers,
//! matrices and group isomorphism types.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::abelian::{FgAbelianGroup, IntMatrix};

/// Invariant-factor list, `"0"` for each free summand.
pub fn group<S: Serializer>(g: &FgAbelianGroup, s: S) -> Result<S::Ok, S::Error> {
    let v = g.invariant_factors();
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in &v {
        seq.serialize_element(x)?;
    }
    seq.end()
}

pub fn groups<S: Serializer>(gs: &[FgAbelianGroup], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = gs.iter().map(FgAbelianGroup::invariant_factors).collect();
    s.collect_seq(v)
}

/// Row-major matrix of decimal strings.
pub fn matrix<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    s.collect_seq(rows)
}

pub fn matrices<S: Serializer>(ms: &[IntMatrix], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Vec<Vec<String>>> = ms
        .iter()
        .map(|m| m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect())
        .collect();
    s.collect_seq(v)
}

pub fn ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

pub fn int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
