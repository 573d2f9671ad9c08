//! Shared evaluation context: configuration knobs, the tetrahedron cache,
//! products of index factors to a target precision, and the adaptive
//! symmetric window used to truncate one-dimensional charge sums.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::series::{HalfExp, LaurentPoly, QSeries};
use crate::tetrahedron::{IndexCharge, TetCache};

/// Truncation knobs. All have defaults; the CLI exposes them as flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest half-width `E` of a one-dimensional window before giving up.
    pub window_cap: u32,
    /// Largest half-width of a lattice box; `None` picks 48 for rank <= 2, 16 otherwise.
    pub box_cap: Option<u32>,
    /// Number `W` of consecutive vanishing terms (or shells) required at each end.
    pub margin: u32,
    /// Ceiling for the minimal-degree search, in half-units.
    pub degree_ceiling: HalfExp,
    /// Extra half-width added after a window has stabilized.
    pub window_pad: u32,
    /// Extra half-width added after a box has stabilized.
    pub box_pad: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            window_cap: 64,
            box_cap: None,
            margin: 3,
            degree_ceiling: HalfExp(400),
            window_pad: 0,
            box_pad: 0,
        }
    }
}

impl Config {
    pub fn box_cap_for_rank(&self, rank: usize) -> u32 {
        self.box_cap
            .unwrap_or(if rank <= 2 { 48 } else { 16 })
    }
}

/// A computed value together with the truncation extent that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Windowed<T> {
    pub value: T,
    /// Half-width of the stabilized window or box, if one was needed.
    pub extent: Option<u32>,
}

/// Evaluation context. Cheap to clone; clones share the tetrahedron cache.
#[derive(Clone, Debug)]
pub struct Engine {
    config: Config,
    tets: Arc<TetCache>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(Config::default())
    }
}

/// One factor of a product evaluated by [`Engine::product`].
#[derive(Clone, Debug)]
pub(crate) enum Factor<'a> {
    Tet(IndexCharge),
    /// A series already computed; it must be known to whatever precision
    /// the product asks of it.
    Series(&'a QSeries),
    Poly(&'a LaurentPoly),
}

impl Engine {
    pub fn new(config: Config) -> Self {
        let tets = Arc::new(TetCache::new(config.degree_ceiling));
        Engine { config, tets }
    }

    /// A new engine with different knobs but the same cache.
    pub fn with_config(&self, config: Config) -> Self {
        Engine {
            config,
            tets: Arc::clone(&self.tets),
        }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn cache(&self) -> &TetCache {
        &self.tets
    }

    pub fn tet_index(&self, c: IndexCharge, prec: HalfExp) -> QSeries {
        self.tets.index(c, prec)
    }

    pub fn tet_min_degree(&self, c: IndexCharge) -> Result<HalfExp> {
        self.tets.min_degree(c)
    }

    pub(crate) fn factor_bound(&self, f: &Factor<'_>) -> HalfExp {
        match f {
            Factor::Tet(c) => self.tets.degree_lower_bound(*c),
            Factor::Series(s) => s.lead(),
            Factor::Poly(p) => p.min_degree().unwrap_or(HalfExp(i64::MAX / 4)),
        }
    }

    /// Lower bound on the minimal degree of `q^(shift/2) * prod factors`.
    pub(crate) fn product_bound(&self, shift: HalfExp, factors: &[Factor<'_>]) -> HalfExp {
        factors
            .iter()
            .fold(shift, |acc, f| acc + self.factor_bound(f))
    }

    /// `sign * q^(shift/2) * prod factors`, known to `prec`.
    ///
    /// Each factor is evaluated only as far as the other factors' degree
    /// bounds allow it to matter.
    pub(crate) fn product(
        &self,
        sign: i64,
        shift: HalfExp,
        factors: &[Factor<'_>],
        prec: HalfExp,
    ) -> Result<QSeries> {
        let bounds: Vec<HalfExp> = factors.iter().map(|f| self.factor_bound(f)).collect();
        let total = bounds.iter().fold(shift, |acc, b| acc + *b);
        if total >= prec {
            return Ok(QSeries::zero(prec));
        }
        let mut acc = QSeries::one(prec - total);
        for (f, bound) in factors.iter().zip(&bounds) {
            let need = prec - (total - *bound);
            let s = match f {
                Factor::Tet(c) => self.tets.index(*c, need),
                Factor::Series(s) => {
                    if s.prec() < need {
                        return Err(Error::InsufficientPrecision {
                            needed: need,
                            available: s.prec(),
                        });
                    }
                    s.truncate(need)
                }
                Factor::Poly(p) => p.to_series(need),
            };
            acc = &acc * &s;
        }
        let out = acc.shift(shift).scale(&BigInt::from(sign));
        if out.prec() < prec {
            return Err(Error::InsufficientPrecision {
                needed: prec,
                available: out.prec(),
            });
        }
        Ok(out.truncate(prec))
    }

    /// Lower bound on the minimal degree of `q^(shift/2) * prod I(c)`, and
    /// whether it is the exact degree.
    pub(crate) fn charge_bound(&self, shift: HalfExp, charges: &[IndexCharge]) -> TermBound {
        charges.iter().fold(
            TermBound {
                bound: shift,
                exact: true,
            },
            |acc, c| {
                let (d, exact) = self.tets.degree_bound(*c);
                TermBound {
                    bound: acc.bound + d,
                    exact: acc.exact && exact,
                }
            },
        )
    }

    /// Finds the half-width `E` of a symmetric window `[-E, E]` outside of
    /// which every term vanishes below `prec`, then adds the configured pad.
    ///
    /// `probe(k, at)` bounds the degree of term `k` from below; the bound must
    /// be exact whenever the degree is below `at`. The `W` outermost terms at
    /// each end must vanish, and each end's bound must be at least the exact
    /// degree of some term further inside. Term degrees are convex in the
    /// summation index, so every term beyond such an end vanishes too.
    pub(crate) fn stabilize_window(
        &self,
        what: impl FnOnce() -> String,
        prec: HalfExp,
        mut probe: impl FnMut(i64, HalfExp) -> Result<TermBound>,
    ) -> Result<u32> {
        let margin = self.config.margin.max(1) as i64;
        let cap = self.config.window_cap as i64;
        let mut seen: HashMap<i64, TermBound> = HashMap::new();
        let mut extent = margin - 1;
        while extent <= cap {
            for k in [extent, -extent] {
                for j in 0..margin.min(extent + 1) {
                    let k = if k >= 0 { k - j } else { k + j };
                    if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(k) {
                        slot.insert(probe(k, prec)?);
                    }
                }
            }
            let quiet = (0..margin).all(|j| seen[&(extent - j)].bound >= prec && seen[&(-extent + j)].bound >= prec);
            if quiet && extent > 0 {
                let mut inner: Vec<(HalfExp, i64)> = (-extent..=extent).map(|k| (seen[&k].bound, k)).collect();
                inner.sort();
                let ceiling = self.config.degree_ceiling;
                let mut witnessed = |end: i64| -> Result<bool> {
                    // Sharpen the end's own bound before looking for a witness.
                    let mut at = prec;
                    let mut limit = seen[&end].bound;
                    while limit >= at && at < ceiling {
                        at = HalfExp((2 * at.0).max(16)).min(ceiling);
                        limit = limit.max(probe(end, at)?.bound);
                    }
                    for &(b, k) in &inner {
                        if b > limit {
                            break;
                        }
                        if k == end {
                            continue;
                        }
                        let tb = probe(k, limit + HalfExp(1))?;
                        if tb.exact && tb.bound <= limit {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                };
                if witnessed(extent)? && witnessed(-extent)? {
                    return Ok(extent as u32 + self.config.window_pad);
                }
            }
            extent += 1;
        }
        Err(Error::WindowNotStabilized {
            what: what(),
            cap: self.config.window_cap,
        })
    }
}

/// Degree bound of one term of a windowed sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct TermBound {
    pub bound: HalfExp,
    pub exact: bool,
}
