//! Pentagon and triality relations of the tetrahedron index, evaluated as
//! exact series on both sides and compared coefficientwise.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::engine::{Engine, Factor, Windowed};
use crate::error::Result;
use crate::series::{HalfExp, QSeries};
use crate::tetrahedron::IndexCharge;

/// Which normalization of a relation to check.
///
/// `Literal` evaluates the relations with the prefactors exactly as they are
/// usually quoted alongside the Bailey construction. `Corrected` uses the
/// prefactors that follow from the definition of `I(m, e)`:
///
/// * triality: `I(m,e) = (-q^(1/2))^m I(-e-m, m) = (-q^(1/2))^(-e) I(e, -e-m)`;
/// * shifted pentagon: the left side carries
///   `(-1)^(m2-e1+e0) q^((m2-e1) - e0/2)` instead of `-q^(-3 e0/2)`;
/// * Bailey step: `alpha'_n = (-1)^n q^(-n/2) I(..) alpha_n` and the
///   `beta'` kernel carries `(-1)^m q^(k - m/2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    #[default]
    Literal,
    Corrected,
}

impl FromStr for Form {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "literal" => Ok(Form::Literal),
            "corrected" => Ok(Form::Corrected),
            other => Err(format!("unknown form `{other}` (literal|corrected)")),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Literal => "literal",
            Form::Corrected => "corrected",
        })
    }
}

fn bigint_str<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// First disagreeing coefficient between two sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub half_exp: HalfExp,
    #[serde(serialize_with = "bigint_str")]
    pub lhs: BigInt,
    #[serde(serialize_with = "bigint_str")]
    pub rhs: BigInt,
    /// Which sub-check failed, e.g. `second equality` or `m=2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
}

/// Outcome of comparing two series up to an order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub verified_to: HalfExp,
    pub holds: bool,
    pub first_mismatch: Option<Mismatch>,
    /// Largest stabilized window half-width used by the check, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
}

impl CheckReport {
    pub fn vacuous(prec: HalfExp) -> Self {
        CheckReport {
            verified_to: prec,
            holds: true,
            first_mismatch: None,
            window: None,
        }
    }

    pub fn compare(lhs: &QSeries, rhs: &QSeries, order: HalfExp) -> Result<Self> {
        let first_mismatch = lhs
            .first_difference(rhs, order)?
            .map(|(half_exp, lhs, rhs)| Mismatch {
                half_exp,
                lhs,
                rhs,
                case: None,
            });
        Ok(CheckReport {
            verified_to: order,
            holds: first_mismatch.is_none(),
            first_mismatch,
            window: None,
        })
    }

    fn labelled(mut self, case: impl Into<String>) -> Self {
        if let Some(m) = &mut self.first_mismatch {
            m.case = Some(case.into());
        }
        self
    }

    fn with_window(mut self, w: Option<u32>) -> Self {
        self.window = self.window.max(w);
        self
    }

    /// Combines two reports; the earliest mismatch wins, ties go to `self`.
    pub fn merge(self, other: CheckReport) -> CheckReport {
        let verified_to = self.verified_to.min(other.verified_to);
        let window = self.window.max(other.window);
        let first_mismatch = match (self.first_mismatch, other.first_mismatch) {
            (Some(a), Some(b)) => Some(if b.half_exp < a.half_exp { b } else { a }),
            (a, b) => a.or(b),
        };
        CheckReport {
            verified_to,
            holds: first_mismatch.is_none(),
            first_mismatch,
            window,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_mismatch {
            None => write!(f, "holds to O(q^({}))", self.verified_to),
            Some(m) => {
                write!(
                    f,
                    "FAILS at q^({}): lhs {} vs rhs {}",
                    m.half_exp, m.lhs, m.rhs
                )?;
                if let Some(case) = &m.case {
                    write!(f, " [{case}]")?;
                }
                Ok(())
            }
        }
    }
}

fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn ic(m: i64, e: i64) -> IndexCharge {
    IndexCharge::new(m, e)
}

/// Pentagon arguments `(m1, m2, e1, e2)`; `m3 = m1 + m2` is implied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PentagonArgs {
    pub m1: i64,
    pub m2: i64,
    pub e1: i64,
    pub e2: i64,
}

impl PentagonArgs {
    pub fn new(m1: i64, m2: i64, e1: i64, e2: i64) -> Self {
        PentagonArgs { m1, m2, e1, e2 }
    }
}

impl Engine {
    /// Checks both triality equalities at charge `c`.
    pub fn triality_check(&self, c: IndexCharge, form: Form, prec: HalfExp) -> Result<CheckReport> {
        if prec.0 <= 0 {
            return Ok(CheckReport::vacuous(prec));
        }
        let (m, e) = (c.m, c.e);
        let lhs = self.tet_index(c, prec);
        let (first, second) = match form {
            Form::Literal => (
                (parity_sign(m), HalfExp(m), ic(-e - m, e)),
                (parity_sign(e), HalfExp(e), ic(e, -e - m)),
            ),
            Form::Corrected => (
                (parity_sign(m), HalfExp(m), ic(-e - m, m)),
                (parity_sign(e), HalfExp(-e), ic(e, -e - m)),
            ),
        };
        let mut report: Option<CheckReport> = None;
        for (label, (sign, shift, charge)) in [("first equality", first), ("second equality", second)] {
            let rhs = self.product(sign, shift, &[Factor::Tet(charge)], prec)?;
            let r = CheckReport::compare(&lhs, &rhs, prec)?.labelled(label);
            report = Some(match report {
                None => r,
                Some(prev) => prev.merge(r),
            });
        }
        Ok(report.expect("two equalities"))
    }

    /// `I(m1 - e2, e1) I(m2 - e1, e2)`.
    pub fn pentagon_lhs(&self, a: PentagonArgs, prec: HalfExp) -> Result<QSeries> {
        self.product(
            1,
            HalfExp::ZERO,
            &[
                Factor::Tet(ic(a.m1 - a.e2, a.e1)),
                Factor::Tet(ic(a.m2 - a.e1, a.e2)),
            ],
            prec,
        )
    }

    /// `sum_{e3} q^(e3) I(m1, e1+e3) I(m2, e2+e3) I(m1+m2, e3)`.
    pub fn pentagon_rhs(&self, a: PentagonArgs, prec: HalfExp) -> Result<QSeries> {
        Ok(self.pentagon_rhs_windowed(a, prec)?.value)
    }

    pub fn pentagon_rhs_windowed(&self, a: PentagonArgs, prec: HalfExp) -> Result<Windowed<QSeries>> {
        self.charge_sum(
            || format!("pentagon rhs {a:?}"),
            prec,
            |e3| {
                (
                    HalfExp(2 * e3),
                    [
                        ic(a.m1, a.e1 + e3),
                        ic(a.m2, a.e2 + e3),
                        ic(a.m1 + a.m2, e3),
                    ],
                )
            },
        )
    }

    pub fn pentagon_check(&self, a: PentagonArgs, prec: HalfExp) -> Result<CheckReport> {
        if prec.0 <= 0 {
            return Ok(CheckReport::vacuous(prec));
        }
        let lhs = self.pentagon_lhs(a, prec)?;
        let rhs = self.pentagon_rhs_windowed(a, prec)?;
        Ok(CheckReport::compare(&lhs, &rhs.value, prec)?.with_window(rhs.extent))
    }

    /// Left side of the shifted pentagon relation.
    ///
    /// `Literal`: `-q^(-3 e0/2) I(m1-e2+e0, e1-e0) I(-m2+e1-e2, m2-e1+e0)`.
    pub fn pentagon_shifted_lhs(
        &self,
        a: PentagonArgs,
        e0: i64,
        form: Form,
        prec: HalfExp,
    ) -> Result<QSeries> {
        let (sign, shift) = match form {
            Form::Literal => (-1, HalfExp(-3 * e0)),
            Form::Corrected => (
                parity_sign(a.m2 - a.e1 + e0),
                HalfExp(2 * (a.m2 - a.e1) - e0),
            ),
        };
        self.product(
            sign,
            shift,
            &[
                Factor::Tet(ic(a.m1 - a.e2 + e0, a.e1 - e0)),
                Factor::Tet(ic(-a.m2 + a.e1 - a.e2, a.m2 - a.e1 + e0)),
            ],
            prec,
        )
    }

    /// `sum_{e3} q^(e3 + (m2-e1)/2) I(m1, e1+e3) I(m2, e2+e3) I(m1+m2, e0+e3)`.
    pub fn pentagon_shifted_rhs(&self, a: PentagonArgs, e0: i64, prec: HalfExp) -> Result<QSeries> {
        Ok(self.pentagon_shifted_rhs_windowed(a, e0, prec)?.value)
    }

    pub fn pentagon_shifted_rhs_windowed(
        &self,
        a: PentagonArgs,
        e0: i64,
        prec: HalfExp,
    ) -> Result<Windowed<QSeries>> {
        self.charge_sum(
            || format!("shifted pentagon rhs {a:?} e0={e0}"),
            prec,
            |e3| {
                (
                    HalfExp(2 * e3 + a.m2 - a.e1),
                    [
                        ic(a.m1, a.e1 + e3),
                        ic(a.m2, a.e2 + e3),
                        ic(a.m1 + a.m2, e0 + e3),
                    ],
                )
            },
        )
    }

    pub fn pentagon_shifted_check(
        &self,
        a: PentagonArgs,
        e0: i64,
        form: Form,
        prec: HalfExp,
    ) -> Result<CheckReport> {
        if prec.0 <= 0 {
            return Ok(CheckReport::vacuous(prec));
        }
        let lhs = self.pentagon_shifted_lhs(a, e0, form, prec)?;
        let rhs = self.pentagon_shifted_rhs_windowed(a, e0, prec)?;
        Ok(CheckReport::compare(&lhs, &rhs.value, prec)?.with_window(rhs.extent))
    }

    /// Pentagon check over every tuple in `range^4`, in parallel.
    pub fn pentagon_sweep(
        &self,
        range: std::ops::RangeInclusive<i64>,
        prec: HalfExp,
    ) -> Vec<(PentagonArgs, Result<CheckReport>)> {
        let r: Vec<i64> = range.collect();
        let mut tuples = Vec::new();
        for &m1 in &r {
            for &m2 in &r {
                for &e1 in &r {
                    for &e2 in &r {
                        tuples.push(PentagonArgs::new(m1, m2, e1, e2));
                    }
                }
            }
        }
        tuples
            .into_par_iter()
            .map(|a| (a, self.pentagon_check(a, prec)))
            .collect()
    }

    /// Shifted-pentagon check over every tuple in `range^5`, in parallel.
    pub fn pentagon_shifted_sweep(
        &self,
        range: std::ops::RangeInclusive<i64>,
        form: Form,
        prec: HalfExp,
    ) -> Vec<((PentagonArgs, i64), Result<CheckReport>)> {
        let r: Vec<i64> = range.collect();
        let mut tuples = Vec::new();
        for &m1 in &r {
            for &m2 in &r {
                for &e1 in &r {
                    for &e2 in &r {
                        for &e0 in &r {
                            tuples.push((PentagonArgs::new(m1, m2, e1, e2), e0));
                        }
                    }
                }
            }
        }
        tuples
            .into_par_iter()
            .map(|(a, e0)| ((a, e0), self.pentagon_shifted_check(a, e0, form, prec)))
            .collect()
    }

    /// Triality check over every charge with `|m|, |e| <= bound`, in parallel.
    pub fn triality_sweep(
        &self,
        bound: i64,
        form: Form,
        prec: HalfExp,
    ) -> Vec<(IndexCharge, Result<CheckReport>)> {
        let charges: Vec<IndexCharge> = (-bound..=bound)
            .flat_map(|m| (-bound..=bound).map(move |e| ic(m, e)))
            .collect();
        charges
            .into_par_iter()
            .map(|c| (c, self.triality_check(c, form, prec)))
            .collect()
    }

    /// Sums `q^(shift(k)/2) * prod I(charges(k))` over `k` in a stabilized window.
    fn charge_sum<const N: usize>(
        &self,
        what: impl FnOnce() -> String,
        prec: HalfExp,
        term: impl Fn(i64) -> (HalfExp, [IndexCharge; N]),
    ) -> Result<Windowed<QSeries>> {
        let factors = |k: i64| {
            let (shift, charges) = term(k);
            (shift, charges.map(Factor::Tet))
        };
        let extent = self.stabilize_window(what, prec, |k, _| {
            let (shift, charges) = term(k);
            Ok(self.charge_bound(shift, &charges))
        })? as i64;
        let mut acc = QSeries::zero(prec);
        for k in -extent..=extent {
            let (shift, fs) = factors(k);
            if self.product_bound(shift, &fs) >= prec {
                continue;
            }
            acc = &acc + &self.product(1, shift, &fs, prec)?;
        }
        Ok(Windowed {
            value: acc,
            extent: Some(extent as u32),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m1: i64, m2: i64, e1: i64, e2: i64) -> PentagonArgs {
        PentagonArgs::new(m1, m2, e1, e2)
    }

    #[test]
    fn triality_at_origin_is_trivial() {
        let engine = Engine::default();
        for form in [Form::Literal, Form::Corrected] {
            assert!(engine.triality_check(ic(0, 0), form, HalfExp(12)).unwrap().holds);
        }
    }

    #[test]
    fn literal_triality_fails_where_half_powers_appear() {
        // (-q^(1/2))^1 I(-1, 0) has only half-integer powers while I(1, 0)
        // has only integer ones.
        let engine = Engine::default();
        let r = engine.triality_check(ic(1, 0), Form::Literal, HalfExp(12)).unwrap();
        assert!(!r.holds);
        let m = r.first_mismatch.unwrap();
        assert_eq!(m.half_exp, HalfExp(1));
        assert_eq!(m.case.as_deref(), Some("first equality"));
    }

    #[test]
    fn corrected_triality_holds() {
        let engine = Engine::default();
        for (m, e) in [(1, 0), (-2, 3), (3, -1), (0, -4)] {
            let r = engine.triality_check(ic(m, e), Form::Corrected, HalfExp(12)).unwrap();
            assert!(r.holds, "({m},{e}): {r}");
        }
    }

    #[test]
    fn pentagon_lhs_substitutions() {
        let engine = Engine::default();
        let prec = HalfExp(10);
        let i00 = engine.tet_index(ic(0, 0), prec);
        assert_eq!(engine.pentagon_lhs(p(0, 0, 0, 0), prec).unwrap(), (&i00 * &i00).truncate(prec));
        // (1,0,0,0): I(m1 - e2, e1) I(m2 - e1, e2) = I(1,0) I(0,0).
        let expect = (&engine.tet_index(ic(1, 0), prec) * &engine.tet_index(ic(0, 0), prec)).truncate(prec);
        assert_eq!(engine.pentagon_lhs(p(1, 0, 0, 0), prec).unwrap(), expect);
    }

    #[test]
    fn pentagon_examples_hold() {
        let engine = Engine::default();
        for a in [p(0, 0, 0, 0), p(1, -1, 2, 0), p(0, 0, 1, -1)] {
            let r = engine.pentagon_check(a, HalfExp(8)).unwrap();
            assert!(r.holds, "{a:?}: {r}");
            assert!(r.window.is_some());
        }
    }

    #[test]
    fn shifted_lhs_substitutions() {
        let engine = Engine::default();
        let prec = HalfExp(8);
        let got = engine
            .pentagon_shifted_lhs(p(0, 0, 0, 0), 1, Form::Literal, prec)
            .unwrap();
        let expect = (&engine.tet_index(ic(1, -1), HalfExp(20))
            * &engine.tet_index(ic(0, 1), HalfExp(20)))
            .shift(HalfExp(-3))
            .neg()
            .truncate(prec);
        assert_eq!(got, expect);
        let a = p(2, -1, 1, 0);
        let got = engine.pentagon_shifted_lhs(a, 0, Form::Literal, prec).unwrap();
        let expect = (&engine.tet_index(ic(2, 1), prec) * &engine.tet_index(ic(2, -2), prec))
            .neg()
            .truncate(prec);
        assert_eq!(got, expect);
    }

    #[test]
    fn corrected_shifted_pentagon_holds() {
        let engine = Engine::default();
        for (a, e0) in [(p(0, 0, 0, 0), 1), (p(1, 0, 1, 0), -1), (p(-1, 1, 0, 1), 1)] {
            let r = engine
                .pentagon_shifted_check(a, e0, Form::Corrected, HalfExp(8))
                .unwrap();
            assert!(r.holds, "{a:?} e0={e0}: {r}");
        }
    }

    #[test]
    fn literal_shifted_pentagon_can_fail() {
        let engine = Engine::default();
        let r = engine
            .pentagon_shifted_check(p(-1, -1, -1, -1), 0, Form::Literal, HalfExp(8))
            .unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn degenerate_precision_is_vacuous() {
        let engine = Engine::default();
        let r = engine.pentagon_check(p(1, 1, 1, 1), HalfExp(0)).unwrap();
        assert_eq!(r, CheckReport::vacuous(HalfExp(0)));
        let r = engine.triality_check(ic(1, 0), Form::Literal, HalfExp(-3)).unwrap();
        assert!(r.holds);
        assert_eq!(r.verified_to, HalfExp(-3));
    }

    #[test]
    fn tiny_window_cap_is_reported() {
        let engine = Engine::new(crate::Config {
            window_cap: 1,
            ..Default::default()
        });
        let err = engine.pentagon_rhs(p(2, 2, 2, 2), HalfExp(8)).unwrap_err();
        assert!(matches!(err, crate::Error::WindowNotStabilized { cap: 1, .. }));
    }
}
