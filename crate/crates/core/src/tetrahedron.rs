//! The tetrahedron index
//!
//! ```text
//! I(m, e) = sum_{n >= max(0, -e)} (-1)^n q^(n(n+1)/2 - (n + e/2) m) / ((q;q)_n (q;q)_{n+e})
//! ```
//!
//! together with a shared cache and the minimal-degree function that every
//! truncation bound downstream relies on.

use std::cmp::max;
use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{div_one_minus_q_pow_in_place, HalfExp, QSeries};

/// Magnetic/electric charge pair `(m, e)` labelling `I(m, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IndexCharge {
    pub m: i64,
    pub e: i64,
}

impl IndexCharge {
    pub const fn new(m: i64, e: i64) -> Self {
        IndexCharge { m, e }
    }

    /// First summation index, `(|e| - e) / 2`.
    pub fn floor(&self) -> i64 {
        max(0, -self.e)
    }

    /// Half-exponent of the `n`-th summand's leading power: `n(n+1) - (2n + e) m`.
    pub fn term_lead(&self, n: i64) -> HalfExp {
        HalfExp(n * (n + 1) - (2 * n + self.e) * self.m)
    }
}

impl fmt::Display for IndexCharge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.m, self.e)
    }
}

/// The `n`-th summand, built from the Pochhammer symbols and their inverses.
pub fn tet_term(n: i64, c: IndexCharge, prec: HalfExp) -> Result<QSeries> {
    let floor = c.floor();
    if n < floor {
        return Err(Error::BelowSummationFloor {
            n,
            floor,
            charge: c,
        });
    }
    let lead = c.term_lead(n);
    if lead >= prec {
        return Ok(QSeries::zero(prec));
    }
    let inner = prec - lead;
    let den = &QSeries::qpoch(n as u32, inner) * &QSeries::qpoch((n + c.e) as u32, inner);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    Ok(den.inv()?.scale(&BigInt::from(sign)).shift(lead))
}

/// `I(m, e)` to `prec`, computed directly without caching.
///
/// Summation stops at the first `n >= max(m, floor)` whose leading power is
/// at or past `prec`; beyond that point the leading powers increase strictly.
pub fn tet_index_uncached(c: IndexCharge, prec: HalfExp) -> QSeries {
    let floor = c.floor();
    let stop_from = max(c.m, floor);
    let mut leads = Vec::new();
    let mut n = floor;
    loop {
        let lead = c.term_lead(n);
        if n >= stop_from && lead >= prec {
            break;
        }
        leads.push(lead);
        n += 1;
    }
    let Some(&min_lead) = leads.iter().min() else {
        return QSeries::zero(prec);
    };
    if min_lead >= prec {
        return QSeries::zero(prec);
    }
    let width = (prec.0 - min_lead.0) as usize;
    // Denominator 1/((q;q)_n (q;q)_{n+e}) in whole powers of q, grown incrementally.
    let den_len = width.div_ceil(2);
    let mut den = vec![BigInt::zero(); den_len];
    den[0] = BigInt::from(1);
    for k in 1..=floor {
        div_one_minus_q_pow_in_place(&mut den, k as usize);
    }
    for k in 1..=floor + c.e {
        div_one_minus_q_pow_in_place(&mut den, k as usize);
    }
    let mut acc = vec![BigInt::zero(); width];
    for (i, lead) in leads.iter().enumerate() {
        let n = floor + i as i64;
        if i > 0 {
            div_one_minus_q_pow_in_place(&mut den, n as usize);
            div_one_minus_q_pow_in_place(&mut den, (n + c.e) as usize);
        }
        if *lead >= prec {
            continue;
        }
        let off = (lead.0 - min_lead.0) as usize;
        let negative = n % 2 == 1;
        for (j, d) in den.iter().enumerate() {
            let idx = off + 2 * j;
            if idx >= width {
                break;
            }
            if negative {
                acc[idx] -= d;
            } else {
                acc[idx] += d;
            }
        }
    }
    QSeries::from_block(min_lead, acc, prec)
}

#[derive(Clone, Copy, Debug)]
enum Degree {
    Exact(HalfExp),
    /// Zero below this half-exponent; the true degree was not located.
    AtLeast(HalfExp),
}

/// Memo for tetrahedron indices and their minimal degrees.
///
/// Holds, per charge, the highest-precision series computed so far; requests
/// at lower precision are answered by truncation. Concurrent callers may
/// duplicate work but always see the same answer.
#[derive(Debug)]
pub struct TetCache {
    ceiling: HalfExp,
    series: RwLock<HashMap<IndexCharge, QSeries>>,
    degrees: RwLock<HashMap<IndexCharge, Degree>>,
}

impl Default for TetCache {
    fn default() -> Self {
        TetCache::new(HalfExp(400))
    }
}

impl TetCache {
    pub fn new(ceiling: HalfExp) -> Self {
        TetCache {
            ceiling,
            series: RwLock::new(HashMap::new()),
            degrees: RwLock::new(HashMap::new()),
        }
    }

    pub fn ceiling(&self) -> HalfExp {
        self.ceiling
    }

    pub fn len(&self) -> usize {
        self.series.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, c: IndexCharge, prec: HalfExp) -> QSeries {
        if let Some(s) = self.series.read().unwrap().get(&c) {
            if s.prec() >= prec {
                return s.truncate(prec);
            }
        }
        let s = tet_index_uncached(c, prec);
        let mut map = self.series.write().unwrap();
        match map.get(&c) {
            Some(old) if old.prec() >= prec => {}
            _ => {
                map.insert(c, s.clone());
            }
        }
        s
    }

    fn degree(&self, c: IndexCharge) -> Degree {
        if let Some(d) = self.degrees.read().unwrap().get(&c) {
            return *d;
        }
        let mut p = HalfExp(16).min(self.ceiling);
        let d = loop {
            let s = self.index(c, p);
            if let Some(d) = s.min_degree() {
                break Degree::Exact(d);
            }
            if p >= self.ceiling {
                break Degree::AtLeast(p);
            }
            p = HalfExp(2 * p.0).min(self.ceiling);
        };
        self.degrees.write().unwrap().insert(c, d);
        d
    }

    /// Exponent of the lowest nonzero coefficient of `I(m, e)`.
    ///
    /// Searched at doubling precision up to the ceiling; errors rather than
    /// guessing if nothing nonzero turns up.
    pub fn min_degree(&self, c: IndexCharge) -> Result<HalfExp> {
        match self.degree(c) {
            Degree::Exact(d) => Ok(d),
            Degree::AtLeast(ceiling) => Err(Error::DegreeCeiling { charge: c, ceiling }),
        }
    }

    /// A proven lower bound on the minimal degree: exact when found, the
    /// ceiling otherwise.
    pub fn degree_lower_bound(&self, c: IndexCharge) -> HalfExp {
        self.degree_bound(c).0
    }

    /// The lower bound together with whether it is exact.
    pub(crate) fn degree_bound(&self, c: IndexCharge) -> (HalfExp, bool) {
        match self.degree(c) {
            Degree::Exact(d) => (d, true),
            Degree::AtLeast(d) => (d, false),
        }
    }
}
