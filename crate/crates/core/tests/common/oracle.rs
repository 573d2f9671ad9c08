//! Direct, uncached summation used as an independent reference.
//!
//! Polynomials are sparse maps from half-exponent to coefficient, always
//! truncated below an explicit precision. Denominators are expanded by
//! building `(q)_n (q)_{n+e}` densely and inverting it by the triangular
//! recurrence, not by repeated division.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Poly = BTreeMap<i64, BigInt>;

/// Number of n-terms summed for every tetrahedron index.
pub const N_TERMS: i64 = 200;
/// Half-width of the charge windows in pentagon and Bailey sums.
pub const WINDOW: i64 = 32;

fn add_into(acc: &mut Poly, h: i64, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let slot = acc.entry(h).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&h);
    }
}

pub fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (h, c) in b {
        add_into(&mut out, *h, c.clone());
    }
    out
}

pub fn poly_mul(a: &Poly, b: &Poly, prec: i64) -> Poly {
    let mut out = Poly::new();
    for (ha, ca) in a {
        for (hb, cb) in b {
            if ha + hb < prec {
                add_into(&mut out, ha + hb, ca * cb);
            }
        }
    }
    out
}

pub fn poly_scale_shift(a: &Poly, sign: i64, shift: i64) -> Poly {
    a.iter()
        .map(|(h, c)| (h + shift, c * BigInt::from(sign)))
        .collect()
}

pub fn poly_trunc(a: &Poly, prec: i64) -> Poly {
    a.iter()
        .filter(|(h, _)| **h < prec)
        .map(|(h, c)| (*h, c.clone()))
        .collect()
}

/// `(q)_n` as dense integer-power coefficients, first `len` of them.
fn qpoch_dense(n: i64, len: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); len];
    if len == 0 {
        return p;
    }
    p[0] = BigInt::one();
    for j in 1..=n as usize {
        if j >= len {
            break;
        }
        for i in (j..len).rev() {
            let prev = p[i - j].clone();
            p[i] -= prev;
        }
    }
    p
}

fn dense_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a dense series with constant term 1.
fn dense_inv(d: &[BigInt]) -> Vec<BigInt> {
    assert!(d[0].is_one());
    let mut inv = vec![BigInt::zero(); d.len()];
    inv[0] = BigInt::one();
    for i in 1..d.len() {
        let mut s = BigInt::zero();
        for j in 1..=i {
            s += &d[j] * &inv[i - j];
        }
        inv[i] = -s;
    }
    inv
}

/// `I(m, e)` known below `q^(prec/2)`, summing exactly `N_TERMS` values of n.
pub fn tet(m: i64, e: i64, prec: i64) -> Poly {
    let floor = 0.max(-e);
    let mut acc = Poly::new();
    for n in floor..floor + N_TERMS {
        let lead = n * (n + 1) - (2 * n + e) * m;
        if lead >= prec {
            continue;
        }
        let len = ((prec - lead + 1) / 2) as usize;
        let den = dense_mul(&qpoch_dense(n, len), &qpoch_dense(n + e, len), len);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        for (i, c) in dense_inv(&den).into_iter().enumerate() {
            add_into(&mut acc, lead + 2 * i as i64, c * sign);
        }
    }
    let last = floor + N_TERMS - 1;
    assert!(
        last * (last + 1) - (2 * last + e) * m >= prec,
        "n-window too short for I({m},{e})"
    );
    acc
}

/// `sign * q^(shift/2) * prod I(c)` known below `q^(prec/2)`. Every index is a
/// power series in `q^(1/2)` (asserted), so each factor is needed to `prec - shift`.
pub fn tet_product(sign: i64, shift: i64, charges: &[(i64, i64)], prec: i64) -> Poly {
    let need = prec - shift;
    if need <= 0 {
        return Poly::new();
    }
    let mut acc: Poly = [(0, BigInt::one())].into_iter().collect();
    for &(m, e) in charges {
        let f = tet(m, e, need);
        assert!(f.keys().all(|h| *h >= 0), "negative degree in I({m},{e})");
        acc = poly_mul(&acc, &f, need);
    }
    poly_scale_shift(&acc, sign, shift)
}

/// `sum_{e3} q^(e3) I(m1, e1+e3) I(m2, e2+e3) I(m1+m2, e3)` over `|e3| <= WINDOW`.
pub fn pentagon_rhs(m1: i64, m2: i64, e1: i64, e2: i64, prec: i64) -> Poly {
    let mut acc = Poly::new();
    for e3 in -WINDOW..=WINDOW {
        let term = tet_product(1, 2 * e3, &[(m1, e1 + e3), (m2, e2 + e3), (m1 + m2, e3)], prec);
        acc = poly_add(&acc, &term);
    }
    acc
}

/// `I(m1 - e2, e1) I(m2 - e1, e2)`.
pub fn pentagon_lhs(m1: i64, m2: i64, e1: i64, e2: i64, prec: i64) -> Poly {
    tet_product(1, 0, &[(m1 - e2, e1), (m2 - e1, e2)], prec)
}

/// Both triality sides as printed: `(-q^(1/2))^m I(-e-m, e)` and `(-q^(1/2))^e I(e, -e-m)`.
pub fn triality_literal(m: i64, e: i64, prec: i64) -> (Poly, Poly) {
    let par = |k: i64| if k.rem_euclid(2) == 0 { 1 } else { -1 };
    (
        tet_product(par(m), m, &[(-e - m, e)], prec),
        tet_product(par(e), e, &[(e, -e - m)], prec),
    )
}

/// The standard triality: `(-q^(1/2))^m I(-e-m, m)` and `(-q^(1/2))^(-e) I(e, -e-m)`.
pub fn triality_standard(m: i64, e: i64, prec: i64) -> (Poly, Poly) {
    let par = |k: i64| if k.rem_euclid(2) == 0 { 1 } else { -1 };
    (
        tet_product(par(m), m, &[(-e - m, m)], prec),
        tet_product(par(e), -e, &[(e, -e - m)], prec),
    )
}

/// Kernel normalization of one Bailey step.
#[derive(Clone, Copy, Debug)]
pub enum StepForm {
    /// `alpha'_n = -q^(-3n/2) ...`, `beta'_m = sum_k q^(k + m/2) ...`.
    Printed,
    /// `alpha'_n = (-1)^n q^(-n/2) ...`, `beta'_m = sum_k (-1)^m q^(k - m/2) ...`.
    Standard,
}

/// `beta'_m` after one step of parameter `s` from the delta pair at `(n0, t)`,
/// whose `beta_k = I(t, n0 + k)`; k runs over `|k| <= WINDOW`.
pub fn bailey_beta1(n0: i64, t: i64, s: i64, m: i64, form: StepForm, prec: i64) -> Poly {
    let (sign, shift_m) = match form {
        StepForm::Printed => (1, m),
        StepForm::Standard => (if m.rem_euclid(2) == 0 { 1 } else { -1 }, -m),
    };
    let mut acc = Poly::new();
    for k in -WINDOW..=WINDOW {
        let charges = [
            (-m - 2 * s + 2 * t, 2 * s - t + k),
            (m + 2 * s - t, k - m - s - t),
            (t, n0 + k),
        ];
        acc = poly_add(&acc, &tet_product(sign, 2 * k + shift_m, &charges, prec));
    }
    acc
}

/// `sum_n I(t + s, n + m) alpha'_n` after the same step.
pub fn bailey_pair1(n0: i64, t: i64, s: i64, m: i64, form: StepForm, prec: i64) -> Poly {
    let (sign, shift) = match form {
        StepForm::Printed => (-1, -3 * n0),
        StepForm::Standard => (if n0.rem_euclid(2) == 0 { 1 } else { -1 }, -n0),
    };
    tet_product(
        sign,
        shift,
        &[(3 * t - s + n0, 2 * s - t - n0), (t + s, n0 + m)],
        prec,
    )
}

/// Lowest half-exponent of `I(m, e)` below `prec`, if any.
pub fn min_degree(m: i64, e: i64, prec: i64) -> Option<i64> {
    tet(m, e, prec).keys().next().copied()
}
