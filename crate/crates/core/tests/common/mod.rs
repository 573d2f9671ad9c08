#![allow(dead_code)]

pub mod oracle;

use num_bigint::BigInt;
use std::collections::BTreeMap;
use tetra_index::QSeries;

/// Sparse view of a series: half-exponent to nonzero coefficient.
pub fn sparse(s: &QSeries) -> BTreeMap<i64, BigInt> {
    s.terms().map(|(h, c)| (h.0, c.clone())).collect()
}
