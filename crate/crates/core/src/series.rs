//! Truncated Laurent series in `q^(1/2)` with exact integer coefficients.
//!
//! Every exponent is stored in half-units: the integer `h` stands for
//! `q^(h/2)`. A [`QSeries`] carries its own precision `prec`; all
//! coefficients of exponents strictly below `prec` are known, nothing above
//! is claimed. Arithmetic propagates precision conservatively so an
//! under-resolved input shows up as a smaller `prec` rather than as a wrong
//! coefficient.

use std::cmp::min;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent of `q` measured in half-units.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct HalfExp(pub i64);

impl HalfExp {
    pub const ZERO: HalfExp = HalfExp(0);

    /// The half-exponent of `q^n`.
    pub const fn int(n: i64) -> HalfExp {
        HalfExp(2 * n)
    }

    pub const fn halves(self) -> i64 {
        self.0
    }

    pub const fn is_integral(self) -> bool {
        self.0 % 2 == 0
    }
}

impl Add for HalfExp {
    type Output = HalfExp;
    fn add(self, rhs: HalfExp) -> HalfExp {
        HalfExp(self.0 + rhs.0)
    }
}

impl AddAssign for HalfExp {
    fn add_assign(&mut self, rhs: HalfExp) {
        self.0 += rhs.0;
    }
}

impl Sub for HalfExp {
    type Output = HalfExp;
    fn sub(self, rhs: HalfExp) -> HalfExp {
        HalfExp(self.0 - rhs.0)
    }
}

impl Neg for HalfExp {
    type Output = HalfExp;
    fn neg(self) -> HalfExp {
        HalfExp(-self.0)
    }
}

impl fmt::Display for HalfExp {
    /// Prints the exponent value, e.g. `3`, `-1`, `5/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A truncated Laurent series `sum_i coeffs[i] q^((lead + i)/2) + O(q^(prec/2))`.
///
/// Canonical form: either `coeffs` is empty and `lead == prec` (zero to the
/// known order), or `coeffs[0] != 0`. Always `coeffs.len() == prec - lead`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SeriesJson", try_from = "SeriesJson")]
pub struct QSeries {
    lead: HalfExp,
    prec: HalfExp,
    coeffs: Vec<BigInt>,
}

impl QSeries {
    /// The zero series known to `prec`.
    pub fn zero(prec: HalfExp) -> QSeries {
        QSeries {
            lead: prec,
            prec,
            coeffs: Vec::new(),
        }
    }

    /// The constant `1` known to `prec` (zero if `prec <= 0`).
    pub fn one(prec: HalfExp) -> QSeries {
        if prec.0 <= 0 {
            QSeries::zero(prec)
        } else {
            QSeries::monomial(1, HalfExp::ZERO, prec).expect("in window")
        }
    }

    /// `c * q^(h/2)` known to `prec`.
    pub fn monomial(c: impl Into<BigInt>, h: HalfExp, prec: HalfExp) -> Result<QSeries> {
        let c = c.into();
        if c.is_zero() {
            return Ok(QSeries::zero(prec));
        }
        if h >= prec {
            return Err(Error::MonomialOutsideWindow { h, prec });
        }
        let mut coeffs = vec![BigInt::zero(); (prec.0 - h.0) as usize];
        coeffs[0] = c;
        Ok(QSeries {
            lead: h,
            prec,
            coeffs,
        })
    }

    /// Builds a series from a dense coefficient block starting at `lead`.
    ///
    /// `coeffs` must cover exactly `[lead, prec)`; leading zeros are stripped.
    pub fn from_coeffs(lead: HalfExp, coeffs: Vec<BigInt>, prec: HalfExp) -> Result<QSeries> {
        if lead > prec {
            return Err(Error::InvalidSeries(format!(
                "lead {} exceeds precision {}",
                lead.0, prec.0
            )));
        }
        if coeffs.len() as i64 != prec.0 - lead.0 {
            return Err(Error::InvalidSeries(format!(
                "expected {} coefficients, got {}",
                prec.0 - lead.0,
                coeffs.len()
            )));
        }
        Ok(QSeries::canonical(lead, coeffs, prec))
    }

    /// Builds from a dense block that may be longer or shorter than the window;
    /// missing entries are zero and entries at or past `prec` are dropped.
    pub(crate) fn from_block(lead: HalfExp, mut coeffs: Vec<BigInt>, prec: HalfExp) -> QSeries {
        if lead >= prec {
            return QSeries::zero(prec);
        }
        coeffs.resize((prec.0 - lead.0) as usize, BigInt::zero());
        QSeries::canonical(lead, coeffs, prec)
    }

    fn canonical(lead: HalfExp, mut coeffs: Vec<BigInt>, prec: HalfExp) -> QSeries {
        match coeffs.iter().position(|c| !c.is_zero()) {
            None => QSeries::zero(prec),
            Some(0) => QSeries {
                lead,
                prec,
                coeffs,
            },
            Some(skip) => {
                coeffs.drain(..skip);
                QSeries {
                    lead: lead + HalfExp(skip as i64),
                    prec,
                    coeffs,
                }
            }
        }
    }

    /// `q`-Pochhammer symbol `(q;q)_n = prod_{k=1}^{n} (1 - q^k)` known to `prec`.
    pub fn qpoch(n: u32, prec: HalfExp) -> QSeries {
        let mut s = QSeries::one(prec);
        for k in 1..=n as i64 {
            s = s.mul_one_minus_q_pow(k);
        }
        s
    }

    pub fn lead(&self) -> HalfExp {
        self.lead
    }

    pub fn prec(&self) -> HalfExp {
        self.prec
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient, if any below `prec`.
    pub fn min_degree(&self) -> Option<HalfExp> {
        (!self.is_zero()).then_some(self.lead)
    }

    /// Coefficient of `q^(h/2)`, or `None` when `h` is at or past the precision.
    pub fn coeff(&self, h: HalfExp) -> Option<BigInt> {
        if h >= self.prec {
            None
        } else if h < self.lead {
            Some(BigInt::zero())
        } else {
            Some(self.coeffs[(h.0 - self.lead.0) as usize].clone())
        }
    }

    /// Nonzero terms as `(half-exponent, coefficient)` pairs in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (HalfExp, &BigInt)> {
        let lead = self.lead.0;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (HalfExp(lead + i as i64), c))
    }

    /// Forgets every coefficient at or above `prec`.
    pub fn truncate(&self, prec: HalfExp) -> QSeries {
        if prec >= self.prec {
            return self.clone();
        }
        if prec <= self.lead {
            return QSeries::zero(prec);
        }
        let keep = (prec.0 - self.lead.0) as usize;
        QSeries::canonical(self.lead, self.coeffs[..keep].to_vec(), prec)
    }

    /// Multiplication by `q^(h/2)`.
    pub fn shift(&self, h: HalfExp) -> QSeries {
        QSeries {
            lead: self.lead + h,
            prec: self.prec + h,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> QSeries {
        if c.is_zero() {
            return QSeries::zero(self.prec);
        }
        QSeries {
            lead: self.lead,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Coefficientwise sum; precision is the smaller of the two.
    pub fn add(&self, other: &QSeries) -> QSeries {
        let prec = min(self.prec, other.prec);
        let lead = min(self.lead, other.lead);
        if lead >= prec {
            return QSeries::zero(prec);
        }
        let mut out = vec![BigInt::zero(); (prec.0 - lead.0) as usize];
        for s in [self, other] {
            let off = (s.lead.0 - lead.0) as usize;
            for (i, c) in s.coeffs.iter().enumerate() {
                match out.get_mut(off + i) {
                    Some(slot) => *slot += c,
                    None => break,
                }
            }
        }
        QSeries::canonical(lead, out, prec)
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            lead: self.lead,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Cauchy product.
    ///
    /// The result is known to `min(a.prec + b.lead, b.prec + a.lead)`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let prec = min(self.prec + other.lead, other.prec + self.lead);
        let lead = self.lead + other.lead;
        if self.is_zero() || other.is_zero() || lead >= prec {
            return QSeries::zero(prec);
        }
        let len = (prec.0 - lead.0) as usize;
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries::canonical(lead, out, prec)
    }

    /// Multiplicative inverse, known to the same precision.
    ///
    /// Only series `±1 + O(q^(1/2))` are accepted: anything else would need
    /// rational coefficients or a shifted lead.
    pub fn inv(&self) -> Result<QSeries> {
        if self.is_zero() {
            return Err(Error::NotInvertible("series is zero to its known order"));
        }
        if self.lead != HalfExp::ZERO {
            return Err(Error::NotInvertible("lowest term is not the constant term"));
        }
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return Err(Error::NotInvertible("constant term is not +1 or -1"));
        }
        let len = self.coeffs.len();
        let mut out: Vec<BigInt> = Vec::with_capacity(len);
        out.push(c0.clone());
        for n in 1..len {
            let mut acc = BigInt::zero();
            for i in 1..=n {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    acc += a * &out[n - i];
                }
            }
            out.push(-(c0 * acc));
        }
        Ok(QSeries::canonical(HalfExp::ZERO, out, self.prec))
    }

    /// `true` iff every coefficient below `order` agrees.
    ///
    /// Errors if either side is not known up to `order`.
    pub fn eq_to(&self, other: &QSeries, order: HalfExp) -> Result<bool> {
        Ok(self.first_difference(other, order)?.is_none())
    }

    /// Lowest exponent below `order` where the two series differ, with both coefficients.
    pub fn first_difference(
        &self,
        other: &QSeries,
        order: HalfExp,
    ) -> Result<Option<(HalfExp, BigInt, BigInt)>> {
        for s in [self, other] {
            if s.prec < order {
                return Err(Error::InsufficientPrecision {
                    needed: order,
                    available: s.prec,
                });
            }
        }
        let start = min(self.lead, other.lead);
        let mut h = start;
        while h < order {
            let a = self.coeff(h).unwrap_or_default();
            let b = other.coeff(h).unwrap_or_default();
            if a != b {
                return Ok(Some((h, a, b)));
            }
            h.0 += 1;
        }
        Ok(None)
    }

    /// Multiplication by `1 - q^j` for integer `j >= 1`.
    pub fn mul_one_minus_q_pow(&self, j: i64) -> QSeries {
        let step = (2 * j) as usize;
        let mut c = self.coeffs.clone();
        for i in (step..c.len()).rev() {
            let (lo, hi) = c.split_at_mut(i);
            hi[0] -= &lo[i - step];
        }
        QSeries::canonical(self.lead, c, self.prec)
    }

    /// Division by `1 - q^j` for integer `j >= 1`.
    pub fn div_one_minus_q_pow(&self, j: i64) -> QSeries {
        let mut c = self.coeffs.clone();
        div_one_minus_q_pow_in_place(&mut c, (2 * j) as usize);
        QSeries::canonical(self.lead, c, self.prec)
    }

    /// Checks the structural invariants; used by tests as a validation hook.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.lead > self.prec {
            return Err(format!("lead {} above prec {}", self.lead.0, self.prec.0));
        }
        if self.coeffs.len() as i64 != self.prec.0 - self.lead.0 {
            return Err(format!(
                "length {} but window is {}",
                self.coeffs.len(),
                self.prec.0 - self.lead.0
            ));
        }
        if let Some(c) = self.coeffs.first() {
            if c.is_zero() {
                return Err("leading coefficient is zero".into());
            }
        } else if self.lead != self.prec {
            return Err("zero series must have lead == prec".into());
        }
        Ok(())
    }

    /// LaTeX rendering, e.g. `1 - 8q - 9q^{2} + O(q^{3})`.
    pub fn to_latex(&self) -> String {
        render(self, Style::Latex)
    }
}

/// In-place division of a dense block by `1 - q^(step/2)`.
pub(crate) fn div_one_minus_q_pow_in_place(c: &mut [BigInt], step: usize) {
    for i in step..c.len() {
        let (lo, hi) = c.split_at_mut(i);
        if !lo[i - step].is_zero() {
            hi[0] += &lo[i - step];
        }
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}

#[derive(Clone, Copy)]
enum Style {
    Text,
    Latex,
}

fn power(h: HalfExp, style: Style) -> String {
    match (style, h.0) {
        (_, 0) => String::new(),
        (_, 2) => "q".into(),
        (Style::Text, x) if x % 2 == 0 && x > 0 => format!("q^{}", x / 2),
        (Style::Text, x) if x % 2 == 0 => format!("q^({})", x / 2),
        (Style::Text, x) => format!("q^({x}/2)"),
        (Style::Latex, x) if x % 2 == 0 => format!("q^{{{}}}", x / 2),
        (Style::Latex, x) => format!("q^{{{x}/2}}"),
    }
}

fn render(s: &QSeries, style: Style) -> String {
    let mut out = String::new();
    for (h, c) in s.terms() {
        let negative = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let p = power(h, style);
        match (p.is_empty(), mag.is_one(), style) {
            (true, _, _) => out.push_str(&mag.to_string()),
            (false, true, _) => out.push_str(&p),
            (false, false, Style::Text) => out.push_str(&format!("{mag}*{p}")),
            (false, false, Style::Latex) => out.push_str(&format!("{mag}{p}")),
        }
    }
    let big_o = match power(s.prec, style) {
        p if p.is_empty() => "O(1)".to_string(),
        p => format!("O({p})"),
    };
    if out.is_empty() {
        big_o
    } else {
        format!("{out} + {big_o}")
    }
}

impl fmt::Display for QSeries {
    /// Plain-text rendering, e.g. `1 - 8*q - 9*q^2 + O(q^3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, Style::Text))
    }
}

/// Wire form of a series: coefficients as decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub lead_half_exp: i64,
    pub prec_half_exp: i64,
    pub coeffs: Vec<String>,
}

impl From<QSeries> for SeriesJson {
    fn from(s: QSeries) -> Self {
        SeriesJson {
            lead_half_exp: s.lead.0,
            prec_half_exp: s.prec.0,
            coeffs: s.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl TryFrom<SeriesJson> for QSeries {
    type Error = Error;

    fn try_from(j: SeriesJson) -> Result<QSeries> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| {
                c.parse::<BigInt>()
                    .map_err(|_| Error::InvalidSeries(format!("bad coefficient `{c}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        QSeries::from_coeffs(HalfExp(j.lead_half_exp), coeffs, HalfExp(j.prec_half_exp))
    }
}

/// A finite Laurent polynomial in `q^(1/2)`, known exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly(BTreeMap<HalfExp, BigInt>);

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, HalfExp::ZERO)
    }

    pub fn monomial(c: impl Into<BigInt>, h: HalfExp) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(c, h);
        p
    }

    pub fn add_term(&mut self, c: impl Into<BigInt>, h: HalfExp) {
        let slot = self.0.entry(h).or_default();
        *slot += c.into();
        if slot.is_zero() {
            self.0.remove(&h);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_degree(&self) -> Option<HalfExp> {
        self.0.keys().next().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (HalfExp, &BigInt)> {
        self.0.iter().map(|(h, c)| (*h, c))
    }

    /// The polynomial as a series known to `prec`.
    pub fn to_series(&self, prec: HalfExp) -> QSeries {
        let Some(lead) = self.min_degree() else {
            return QSeries::zero(prec);
        };
        if lead >= prec {
            return QSeries::zero(prec);
        }
        let mut coeffs = vec![BigInt::zero(); (prec.0 - lead.0) as usize];
        for (h, c) in self.terms().take_while(|(h, _)| *h < prec) {
            coeffs[(h.0 - lead.0) as usize] = c.clone();
        }
        QSeries::canonical(lead, coeffs, prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(lead: i64, cs: &[i64], prec: i64) -> QSeries {
        QSeries::from_block(
            HalfExp(lead),
            cs.iter().map(|&c| BigInt::from(c)).collect(),
            HalfExp(prec),
        )
    }

    // 1 + q etc. in half-units: q is index 2.
    fn poly(cs: &[(i64, i64)], prec: i64) -> QSeries {
        let mut acc = QSeries::zero(HalfExp(prec));
        for &(h, c) in cs {
            acc = &acc + &QSeries::monomial(c, HalfExp(h), HalfExp(prec)).unwrap();
        }
        acc
    }

    #[test]
    fn monomial_examples() {
        let one = QSeries::monomial(1, HalfExp(0), HalfExp(10)).unwrap();
        assert_eq!(one.to_string(), "1 + O(q^5)");
        let z = QSeries::monomial(0, HalfExp(0), HalfExp(4)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.prec(), HalfExp(4));
        assert_eq!(z.lead(), HalfExp(4));
        let m = QSeries::monomial(-1, HalfExp(1), HalfExp(6)).unwrap();
        assert_eq!(m.to_string(), "-q^(1/2) + O(q^3)");
        assert!(matches!(
            QSeries::monomial(3, HalfExp(6), HalfExp(6)),
            Err(Error::MonomialOutsideWindow { .. })
        ));
    }

    #[test]
    fn add_examples() {
        let a = poly(&[(0, 1), (2, 1)], 10);
        let b = poly(&[(0, 1), (2, -1)], 10);
        assert_eq!(&a + &b, poly(&[(0, 2)], 10));
        assert_eq!(&a + &QSeries::zero(HalfExp(10)), a);
        let c = poly(&[(2, 1)], 4);
        let d = poly(&[(2, -1)], 6);
        let sum = &c + &d;
        assert!(sum.is_zero());
        assert_eq!(sum.prec(), HalfExp(4));
    }

    #[test]
    fn mul_examples() {
        let a = poly(&[(0, 1), (2, 1)], 10);
        let b = poly(&[(0, 1), (2, -1)], 10);
        assert_eq!(&a * &b, poly(&[(0, 1), (4, -1)], 10));
        let h = poly(&[(1, 1)], 10);
        let p = &h * &h;
        assert_eq!(p.lead(), HalfExp(2));
        assert_eq!(p.coeff(HalfExp(2)), Some(BigInt::from(1)));
        assert_eq!(p.prec(), HalfExp(11));
    }

    #[test]
    fn inverse_examples() {
        let g = poly(&[(0, 1), (2, -1)], 12).inv().unwrap();
        assert_eq!(g, s(0, &[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0], 12));
        let one = QSeries::one(HalfExp(8));
        assert_eq!(one.inv().unwrap(), one);
        let p2 = QSeries::qpoch(2, HalfExp(20));
        let round = &p2 * &p2.inv().unwrap();
        assert_eq!(round, QSeries::one(HalfExp(20)));
    }

    #[test]
    fn inverse_rejects_non_unit() {
        assert!(poly(&[(0, 2)], 6).inv().is_err());
        assert!(poly(&[(2, 1)], 6).inv().is_err());
        assert!(QSeries::zero(HalfExp(6)).inv().is_err());
        let neg = poly(&[(0, -1), (2, 1)], 8).inv().unwrap();
        assert_eq!(neg, s(0, &[-1, 0, -1, 0, -1, 0, -1, 0], 8));
    }

    #[test]
    fn eq_to_examples() {
        let a = poly(&[(0, 1), (4, -1)], 8);
        let b = &poly(&[(0, 1), (2, 1)], 8) * &poly(&[(0, 1), (2, -1)], 8);
        assert!(a.eq_to(&b, HalfExp(8)).unwrap());
        let one = QSeries::one(HalfExp(10));
        let other = poly(&[(0, 1)], 10);
        let shifted = &other + &QSeries::monomial(1, HalfExp(10), HalfExp(12)).unwrap();
        // shifted has prec 10 because `other` does.
        assert!(one.eq_to(&shifted, HalfExp(10)).unwrap());
        let hi = poly(&[(0, 1), (10, 1)], 12);
        assert!(!QSeries::one(HalfExp(12)).eq_to(&hi, HalfExp(12)).unwrap());
        assert!(matches!(
            one.eq_to(&hi, HalfExp(12)),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn qpoch_examples() {
        assert_eq!(QSeries::qpoch(0, HalfExp(8)), QSeries::one(HalfExp(8)));
        assert_eq!(QSeries::qpoch(1, HalfExp(8)), poly(&[(0, 1), (2, -1)], 8));
        assert_eq!(
            QSeries::qpoch(2, HalfExp(8)),
            poly(&[(0, 1), (2, -1), (4, -1), (6, 1)], 8)
        );
    }

    #[test]
    fn division_undoes_multiplication() {
        let a = poly(&[(-3, 2), (1, -5), (4, 7)], 14);
        for j in 1..4 {
            assert_eq!(a.mul_one_minus_q_pow(j).div_one_minus_q_pow(j), a);
        }
    }

    #[test]
    fn truncate_and_shift() {
        let a = poly(&[(0, 1), (2, 3), (5, -2)], 10);
        assert_eq!(a.truncate(HalfExp(4)), poly(&[(0, 1), (2, 3)], 4));
        assert_eq!(a.truncate(HalfExp(20)), a);
        assert!(a.truncate(HalfExp(-2)).is_zero());
        let b = a.shift(HalfExp(-3));
        assert_eq!(b.lead(), HalfExp(-3));
        assert_eq!(b.prec(), HalfExp(7));
        b.validate().unwrap();
    }

    #[test]
    fn text_and_latex_rendering() {
        let a = poly(&[(-1, 2), (0, 1), (2, -8), (3, 1), (6, 46)], 10);
        assert_eq!(
            a.to_string(),
            "2*q^(-1/2) + 1 - 8*q + q^(3/2) + 46*q^3 + O(q^5)"
        );
        assert_eq!(
            a.to_latex(),
            "2q^{-1/2} + 1 - 8q + q^{3/2} + 46q^{3} + O(q^{5})"
        );
        assert_eq!(QSeries::zero(HalfExp(0)).to_string(), "O(1)");
        assert_eq!(QSeries::zero(HalfExp(3)).to_string(), "O(q^(3/2))");
        assert_eq!(poly(&[(-4, -1)], 2).to_string(), "-q^(-2) + O(q)");
    }

    #[test]
    fn laurent_poly_to_series() {
        let mut p = LaurentPoly::monomial(3, HalfExp(-2));
        p.add_term(-1, HalfExp(5));
        p.add_term(1, HalfExp(9));
        assert_eq!(p.min_degree(), Some(HalfExp(-2)));
        let s = p.to_series(HalfExp(8));
        s.validate().unwrap();
        assert_eq!(s, poly(&[(-2, 3), (5, -1)], 8));
        assert!(p.to_series(HalfExp(-4)).is_zero());
        p.add_term(-3, HalfExp(-2));
        assert_eq!(p.min_degree(), Some(HalfExp(5)));
    }

    #[test]
    fn json_round_trip() {
        let a = poly(&[(-1, 2), (4, -7)], 9);
        let txt = serde_json::to_string(&a).unwrap();
        assert_eq!(
            txt,
            r#"{"lead_half_exp":-1,"prec_half_exp":9,"coeffs":["2","0","0","0","0","-7","0","0","0","0"]}"#
        );
        let back: QSeries = serde_json::from_str(&txt).unwrap();
        assert_eq!(back, a);
        let bad = r#"{"lead_half_exp":0,"prec_half_exp":3,"coeffs":["1"]}"#;
        assert!(serde_json::from_str::<QSeries>(bad).is_err());
    }
}
