//! Bailey pairs with respect to the tetrahedron-index kernel.
//!
//! Two sequences form a pair at parameter `t` when
//! `beta_k(t) = sum_n I(t, n + k) alpha_n(t)`. A step with parameter `s`
//! produces a pair at `t + s`:
//!
//! ```text
//! alpha'_n = -q^(-3n/2) I(3t - s + n, 2s - t - n) alpha_n
//! beta'_m  = sum_k q^(k + m/2) I(-m - 2s + 2t, 2s - t + k) I(m + 2s - t, k - m - s - t) beta_k
//! ```
//!
//! (see [`Form`] for the corrected normalization). `alpha` has finite
//! support and is carried symbolically as `sign * q^(shift/2) * seed * prod I(..)`
//! per index; `beta` is never materialized: it is evaluated lazily through
//! the chain of steps and memoized per level, index and precision.

use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::{Arc, Mutex};

use crate::engine::{Engine, Factor, TermBound, Windowed};
use crate::error::Result;
use crate::identities::{CheckReport, Form};
use crate::series::{HalfExp, LaurentPoly, QSeries};
use crate::tetrahedron::IndexCharge;

/// One `alpha_n`: `sign * q^(shift/2) * seed * prod_j I(charges[j])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaEntry {
    pub seed: LaurentPoly,
    pub sign: i64,
    pub shift: HalfExp,
    pub charges: Vec<IndexCharge>,
}

impl AlphaEntry {
    pub fn from_seed(seed: LaurentPoly) -> Self {
        AlphaEntry {
            seed,
            sign: 1,
            shift: HalfExp::ZERO,
            charges: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.seed.is_zero()
    }

    fn factors(&self) -> Vec<Factor<'_>> {
        std::iter::once(Factor::Poly(&self.seed))
            .chain(self.charges.iter().map(|c| Factor::Tet(*c)))
            .collect()
    }
}

/// A finite-support family `alpha_n`, zero outside `[lo, lo + len)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BaileyAlpha {
    lo: i64,
    entries: Vec<AlphaEntry>,
}

impl BaileyAlpha {
    pub fn zero() -> Self {
        BaileyAlpha::default()
    }

    /// `alpha_n = seeds[n - lo]` on the support, zero elsewhere.
    pub fn from_seeds(lo: i64, seeds: Vec<LaurentPoly>) -> Self {
        BaileyAlpha {
            lo,
            entries: seeds.into_iter().map(AlphaEntry::from_seed).collect(),
        }
    }

    /// `alpha_n = delta_{n, n0}`.
    pub fn delta(n0: i64) -> Self {
        BaileyAlpha::from_seeds(n0, vec![LaurentPoly::one()])
    }

    pub fn support(&self) -> Option<RangeInclusive<i64>> {
        (!self.entries.is_empty()).then(|| self.lo..=self.lo + self.entries.len() as i64 - 1)
    }

    pub fn entry(&self, n: i64) -> Option<&AlphaEntry> {
        if n < self.lo {
            return None;
        }
        self.entries.get((n - self.lo) as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(AlphaEntry::is_zero)
    }

    fn iter(&self) -> impl Iterator<Item = (i64, &AlphaEntry)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, a)| (self.lo + i as i64, a))
    }
}

#[derive(Debug, Default)]
struct LevelMemo {
    betas: Mutex<HashMap<i64, (QSeries, Option<u32>)>>,
}

impl LevelMemo {
    fn get(&self, k: i64, prec: HalfExp) -> Option<(QSeries, Option<u32>)> {
        let map = self.betas.lock().unwrap();
        map.get(&k)
            .filter(|(s, _)| s.prec() >= prec)
            .map(|(s, w)| (s.truncate(prec), *w))
    }

    fn put(&self, k: i64, s: &QSeries, w: Option<u32>) {
        let mut map = self.betas.lock().unwrap();
        match map.get(&k) {
            Some((old, _)) if old.prec() >= s.prec() => {}
            _ => {
                map.insert(k, (s.clone(), w));
            }
        }
    }
}

/// A Bailey pair at parameter `t`, reached from a seed by a sequence of steps.
///
/// States are immutable; [`BaileyState::step`] returns a new state sharing
/// the beta memo of every earlier level.
#[derive(Clone, Debug)]
pub struct BaileyState {
    seed_t: i64,
    t: i64,
    form: Form,
    seed: Arc<BaileyAlpha>,
    alpha: Arc<BaileyAlpha>,
    history: Vec<i64>,
    levels: Vec<Arc<LevelMemo>>,
}

/// The trivially satisfied seed `alpha_n = delta_{n, n0}` at parameter `t`.
pub fn bailey_seed_delta(n0: i64, t: i64) -> BaileyState {
    BaileyState::new(t, BaileyAlpha::delta(n0), Form::Literal)
}

/// Applies one step with parameter `s`.
pub fn bailey_step(state: &BaileyState, s: i64) -> BaileyState {
    state.step(s)
}

impl BaileyState {
    pub fn new(t: i64, alpha: BaileyAlpha, form: Form) -> Self {
        let alpha = Arc::new(alpha);
        BaileyState {
            seed_t: t,
            t,
            form,
            seed: Arc::clone(&alpha),
            alpha,
            history: Vec::new(),
            levels: vec![Arc::default()],
        }
    }

    /// The same chain under another normalization (memo is rebuilt).
    pub fn with_form(&self, form: Form) -> Self {
        let mut state = BaileyState::new(self.seed_t, (*self.seed).clone(), form);
        for &s in &self.history {
            state = state.step(s);
        }
        state
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn seed_t(&self) -> i64 {
        self.seed_t
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn alpha(&self) -> &BaileyAlpha {
        &self.alpha
    }

    pub fn history(&self) -> &[i64] {
        &self.history
    }

    pub fn depth(&self) -> usize {
        self.history.len()
    }

    fn t_at(&self, level: usize) -> i64 {
        self.seed_t + self.history[..level].iter().sum::<i64>()
    }

    pub fn step(&self, s: i64) -> BaileyState {
        let t = self.t;
        let entries = self
            .alpha
            .iter()
            .map(|(n, a)| {
                let mut a = a.clone();
                a.charges.push(IndexCharge::new(3 * t - s + n, 2 * s - t - n));
                match self.form {
                    Form::Literal => {
                        a.sign = -a.sign;
                        a.shift += HalfExp(-3 * n);
                    }
                    Form::Corrected => {
                        if n.rem_euclid(2) == 1 {
                            a.sign = -a.sign;
                        }
                        a.shift += HalfExp(-n);
                    }
                }
                a
            })
            .collect();
        let mut history = self.history.clone();
        history.push(s);
        let mut levels = self.levels.clone();
        levels.push(Arc::default());
        BaileyState {
            seed_t: self.seed_t,
            t: t + s,
            form: self.form,
            seed: Arc::clone(&self.seed),
            alpha: Arc::new(BaileyAlpha {
                lo: self.alpha.lo,
                entries,
            }),
            history,
            levels,
        }
    }
}

impl Engine {
    /// `alpha_n` of a family, known to `prec`.
    pub fn bailey_alpha_value(&self, alpha: &BaileyAlpha, n: i64, prec: HalfExp) -> Result<QSeries> {
        match alpha.entry(n) {
            None => Ok(QSeries::zero(prec)),
            Some(a) => self.product(a.sign, a.shift, &a.factors(), prec),
        }
    }

    /// `sum_n I(t, n + k) alpha_n` over the finite support.
    fn pair_sum(&self, t: i64, alpha: &BaileyAlpha, k: i64, prec: HalfExp) -> Result<QSeries> {
        let mut acc = QSeries::zero(prec);
        for (n, a) in alpha.iter() {
            if a.is_zero() {
                continue;
            }
            let mut fs = a.factors();
            fs.push(Factor::Tet(IndexCharge::new(t, n + k)));
            acc = &acc + &self.product(a.sign, a.shift, &fs, prec)?;
        }
        Ok(acc)
    }

    /// `beta_k` of the state's current level, known to `prec`.
    pub fn bailey_beta(&self, state: &BaileyState, k: i64, prec: HalfExp) -> Result<QSeries> {
        Ok(self.bailey_beta_windowed(state, k, prec)?.value)
    }

    pub fn bailey_beta_windowed(
        &self,
        state: &BaileyState,
        k: i64,
        prec: HalfExp,
    ) -> Result<Windowed<QSeries>> {
        let (value, extent) = self.beta_at(state, state.depth(), k, prec)?;
        Ok(Windowed { value, extent })
    }

    fn beta_at(
        &self,
        state: &BaileyState,
        level: usize,
        m: i64,
        prec: HalfExp,
    ) -> Result<(QSeries, Option<u32>)> {
        let memo = &state.levels[level];
        if let Some(hit) = memo.get(m, prec) {
            return Ok(hit);
        }
        let out = if level == 0 {
            (self.pair_sum(state.seed_t, &state.seed, m, prec)?, None)
        } else {
            let t = state.t_at(level - 1);
            let s = state.history[level - 1];
            let (sign, shift_m) = match state.form {
                Form::Literal => (1, m),
                Form::Corrected => (if m.rem_euclid(2) == 0 { 1 } else { -1 }, -m),
            };
            let kernel = |k: i64| {
                (
                    HalfExp(2 * k + shift_m),
                    IndexCharge::new(-m - 2 * s + 2 * t, 2 * s - t + k),
                    IndexCharge::new(m + 2 * s - t, k - m - s - t),
                )
            };
            let prefix = |k: i64| {
                let (shift, a, b) = kernel(k);
                self.charge_bound(shift, &[a, b])
            };
            // Precision to which beta_k must be known for term k to be resolved.
            let need = |k: i64| prec - prefix(k).bound;
            let extent = self.stabilize_window(
                || format!("beta at level {level}, m={m}"),
                prec,
                |k, at| {
                    let p = prefix(k);
                    let (beta, _) = self.beta_at(state, level - 1, k, at - p.bound)?;
                    Ok(match beta.min_degree() {
                        Some(d) => TermBound {
                            bound: p.bound + d,
                            exact: p.exact,
                        },
                        None => TermBound {
                            bound: at.max(p.bound + beta.prec()),
                            exact: false,
                        },
                    })
                },
            )? as i64;
            let mut acc = QSeries::zero(prec);
            for k in -extent..=extent {
                let (beta, _) = self.beta_at(state, level - 1, k, need(k))?;
                if beta.is_zero() {
                    continue;
                }
                let (shift, a, b) = kernel(k);
                let term = self.product(
                    sign,
                    shift,
                    &[Factor::Tet(a), Factor::Tet(b), Factor::Series(&beta)],
                    prec,
                )?;
                acc = &acc + &term;
            }
            (acc, Some(extent as u32))
        };
        memo.put(m, &out.0, out.1);
        Ok(out)
    }

    /// Checks `beta_m = sum_n I(t, n + m) alpha_n` for every `m` in the range.
    pub fn bailey_verify(
        &self,
        state: &BaileyState,
        m_range: RangeInclusive<i64>,
        prec: HalfExp,
    ) -> Result<CheckReport> {
        let mut report = CheckReport::vacuous(prec);
        if prec.0 <= 0 {
            return Ok(report);
        }
        for m in m_range {
            let lhs = self.bailey_beta_windowed(state, m, prec)?;
            let rhs = self.pair_sum(state.t, &state.alpha, m, prec)?;
            let mut r = CheckReport::compare(&lhs.value, &rhs, prec)?;
            if let Some(mm) = &mut r.first_mismatch {
                mm.case = Some(format!("m={m}"));
            }
            r.window = lhs.extent;
            report = report.merge(r);
        }
        Ok(report)
    }

    /// Seeds a delta pair, then verifies it and every stepped pair.
    /// Returns one report per level, level 0 first.
    pub fn bailey_chain(
        &self,
        n0: i64,
        t: i64,
        steps: &[i64],
        form: Form,
        m_range: RangeInclusive<i64>,
        prec: HalfExp,
    ) -> Result<Vec<CheckReport>> {
        let mut state = BaileyState::new(t, BaileyAlpha::delta(n0), form);
        let mut reports = vec![self.bailey_verify(&state, m_range.clone(), prec)?];
        for &s in steps {
            state = state.step(s);
            reports.push(self.bailey_verify(&state, m_range.clone(), prec)?);
        }
        Ok(reports)
    }
}
