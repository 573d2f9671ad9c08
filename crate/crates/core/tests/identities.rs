mod common;

use num_bigint::BigInt;
use tetra_index::{Config, Engine, Error, Form, HalfExp, IndexCharge, PentagonArgs};

use common::{oracle, sparse};

fn c(m: i64, e: i64) -> IndexCharge {
    IndexCharge::new(m, e)
}

#[test]
fn pentagon_sides_match_oracle() {
    let engine = Engine::default();
    // The last tuple has its nonzero terms well away from e3 = 0.
    for (m1, m2, e1, e2) in [(0, 0, 0, 0), (1, -1, 2, 0), (-2, 1, 0, -1), (1, 2, 1, 2), (2, 2, 2, 2)] {
        let a = PentagonArgs::new(m1, m2, e1, e2);
        let lhs = engine.pentagon_lhs(a, HalfExp(8)).unwrap();
        let rhs = engine.pentagon_rhs(a, HalfExp(8)).unwrap();
        assert_eq!(sparse(&lhs), oracle::pentagon_lhs(m1, m2, e1, e2, 8), "{a:?}");
        assert_eq!(sparse(&rhs), oracle::pentagon_rhs(m1, m2, e1, e2, 8), "{a:?}");
        assert!(engine.pentagon_check(a, HalfExp(8)).unwrap().holds);
    }
}

#[test]
fn pentagon_window_is_reported() {
    let engine = Engine::default();
    let r = engine.pentagon_check(PentagonArgs::new(1, 2, 1, 2), HalfExp(8)).unwrap();
    assert!(r.holds);
    assert!(r.window.is_some_and(|w| w >= 4));
}

#[test]
fn window_cap_is_enforced() {
    let engine = Engine::new(Config {
        window_cap: 1,
        ..Config::default()
    });
    let err = engine.pentagon_rhs(PentagonArgs::new(0, 0, 0, 0), HalfExp(8));
    assert!(matches!(err, Err(Error::WindowNotStabilized { cap: 1, .. })));
}

#[test]
fn printed_triality_disagrees_with_oracle_identity() {
    // The oracle itself exhibits the mismatch, independent of the engine.
    let (l, r) = oracle::triality_literal(1, 0, 12);
    assert_ne!(l, oracle::tet(1, 0, 12));
    assert_eq!(r, oracle::tet(1, 0, 12));
    let report = Engine::default().triality_check(c(1, 0), Form::Literal, HalfExp(12)).unwrap();
    assert!(!report.holds);
    let mm = report.first_mismatch.unwrap();
    assert_eq!(mm.half_exp, HalfExp(1));
}

#[test]
fn standard_triality_verdicts_agree_with_oracle() {
    let engine = Engine::default();
    for m in -3..=3 {
        for e in -3..=3 {
            let i = oracle::tet(m, e, 10);
            let (l, r) = oracle::triality_standard(m, e, 10);
            assert_eq!(l, i, "({m},{e}) first");
            assert_eq!(r, i, "({m},{e}) second");
            assert!(engine.triality_check(c(m, e), Form::Corrected, HalfExp(10)).unwrap().holds);

            let (l, r) = oracle::triality_literal(m, e, 10);
            let literal = l == i && r == i;
            assert_eq!(
                engine.triality_check(c(m, e), Form::Literal, HalfExp(10)).unwrap().holds,
                literal,
                "({m},{e})"
            );
        }
    }
}

#[test]
fn triality_examples() {
    let engine = Engine::default();
    for (m, e) in [(1, 0), (-2, 3), (0, 0)] {
        assert!(engine.triality_check(c(m, e), Form::Corrected, HalfExp(12)).unwrap().holds);
    }
    assert!(engine.triality_check(c(0, 0), Form::Literal, HalfExp(12)).unwrap().holds);
    assert!(!engine.triality_check(c(-2, 3), Form::Literal, HalfExp(12)).unwrap().holds);
}

#[test]
fn shifted_pentagon_forms() {
    let engine = Engine::default();
    let a = PentagonArgs::new(1, 0, 1, 0);
    assert!(engine.pentagon_shifted_check(a, -1, Form::Corrected, HalfExp(8)).unwrap().holds);
    let r = engine.pentagon_shifted_check(a, -1, Form::Literal, HalfExp(8)).unwrap();
    assert_eq!(r.first_mismatch.unwrap().half_exp, HalfExp(3));
    let a = PentagonArgs::new(-1, -1, -1, -1);
    let r = engine.pentagon_shifted_check(a, 0, Form::Literal, HalfExp(8)).unwrap();
    assert!(!r.holds);
    assert!(engine.pentagon_shifted_check(a, 0, Form::Corrected, HalfExp(8)).unwrap().holds);
}

#[test]
fn shifted_pentagon_at_zero_shift_reduces_to_pentagon_rhs() {
    let engine = Engine::default();
    for (m1, m2, e1, e2) in [(0, 0, 0, 0), (1, -1, 1, 0), (-1, 1, 0, 1)] {
        let a = PentagonArgs::new(m1, m2, e1, e2);
        let shifted = engine.pentagon_shifted_rhs(a, 0, HalfExp(10)).unwrap();
        let plain = engine.pentagon_rhs(a, HalfExp(10 + (e1 - m2))).unwrap();
        assert_eq!(shifted, plain.shift(HalfExp(m2 - e1)).truncate(HalfExp(10)));
    }
}

#[test]
fn sweeps_cover_their_grids() {
    let engine = Engine::default();
    assert_eq!(engine.pentagon_sweep(-1..=1, HalfExp(4)).len(), 81);
    assert_eq!(engine.pentagon_shifted_sweep(0..=1, Form::Corrected, HalfExp(4)).len(), 32);
    assert_eq!(engine.triality_sweep(2, Form::Corrected, HalfExp(4)).len(), 25);
}

#[test]
fn mismatch_values_are_the_two_coefficients() {
    let engine = Engine::default();
    let r = engine.triality_check(c(1, 0), Form::Literal, HalfExp(12)).unwrap();
    let mm = r.first_mismatch.unwrap();
    let lhs = engine.tet_index(c(1, 0), HalfExp(12));
    assert_eq!(lhs.coeff(mm.half_exp).unwrap(), mm.lhs);
    assert_ne!(mm.lhs, mm.rhs);
    assert_eq!(mm.lhs, BigInt::from(0));
}
