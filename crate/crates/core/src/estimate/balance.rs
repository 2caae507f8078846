use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmf::Pmf;
use crate::rng::{substream, Purpose};
use crate::stats::{ols, LinearFit};
use crate::types::{GameLog, SportConfig, Team};

/// Lead states with fewer pooled observations are left out of the linear fit.
pub const DEFAULT_MIN_STATE_COUNT: u64 = 50;

/// Fraction of a game's events won by r; `None` for an eventless game.
pub fn balance_fraction(game: &GameLog) -> Option<f64> {
    let total = game.events.len();
    if total == 0 {
        return None;
    }
    let won = game.events.iter().filter(|e| e.team == Team::R).count();
    Some(won as f64 / total as f64)
}

pub fn balance_fractions(games: &[GameLog]) -> Vec<f64> {
    games.iter().filter_map(balance_fraction).collect()
}

/// Simulated balance fractions of perfectly balanced games.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullBalance {
    pub samples: Vec<f64>,
}

impl NullBalance {
    pub fn mass_at(&self, c: f64) -> f64 {
        self.samples.iter().filter(|&&s| s == c).count() as f64 / self.samples.len() as f64
    }

    pub fn mean(&self) -> f64 {
        crate::stats::mean(&self.samples)
    }

    pub fn variance(&self) -> f64 {
        crate::stats::variance(&self.samples)
    }
}

/// Draws `n_sims` games whose event counts follow the corpus' empirical
/// events-per-game distribution (games with at least one event, since the
/// fraction is undefined otherwise) and whose events go to either team with
/// probability 1/2.
pub fn balance_null_distribution(games: &[GameLog], n_sims: usize, seed: u64) -> Result<NullBalance> {
    const MIN_SIMS: usize = 10_000;
    if n_sims < MIN_SIMS {
        return Err(Error::TooFew {
            what: "simulations",
            needed: MIN_SIMS,
            got: n_sims,
        });
    }
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for g in games.iter().filter(|g| !g.events.is_empty()) {
        *counts.entry(g.events.len()).or_insert(0) += 1;
    }
    if counts.is_empty() {
        return Err(Error::NoEvents);
    }
    let sizes: Vec<usize> = counts.keys().copied().collect();
    let weights = WeightedIndex::new(counts.values().copied()).expect("positive counts");
    let mut rng = substream(seed, Purpose::NullBalance, 0);
    let samples = (0..n_sims)
        .map(|_| {
            let n = sizes[weights.sample(&mut rng)];
            let mut won = 0u32;
            let mut left = n;
            while left > 0 {
                let take = left.min(64);
                let bits: u64 = rng.random();
                let mask = if take == 64 { u64::MAX } else { (1u64 << take) - 1 };
                won += (bits & mask).count_ones();
                left -= take;
            }
            won as f64 / n as f64
        })
        .collect();
    Ok(NullBalance { samples })
}

/// `Pr(r wins the next event | lead L)` on the states `-lmax..=lmax`, with
/// pooled observation counts. Leads beyond the range read the boundary value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LeadFunctionFields", into = "LeadFunctionFields")]
pub struct LeadFunction {
    lmax: u32,
    values: Vec<f64>,
    counts: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct LeadFunctionFields {
    lmax: u32,
    /// Indexed by `L + lmax`.
    values: Vec<f64>,
    #[serde(default)]
    counts: Vec<u64>,
}

impl TryFrom<LeadFunctionFields> for LeadFunction {
    type Error = Error;

    fn try_from(f: LeadFunctionFields) -> Result<Self> {
        let counts = if f.counts.is_empty() {
            vec![0; f.values.len()]
        } else {
            f.counts
        };
        LeadFunction::new(f.lmax, f.values, counts)
    }
}

impl From<LeadFunction> for LeadFunctionFields {
    fn from(p: LeadFunction) -> Self {
        LeadFunctionFields {
            lmax: p.lmax,
            values: p.values,
            counts: p.counts,
        }
    }
}

/// `(phi(+L), phi(-L))` from the estimate at `+L`, arranged so that the pair
/// sums to exactly one.
fn mirror_pair(v: f64) -> (f64, f64) {
    if v >= 0.5 {
        (v, 1.0 - v)
    } else {
        let neg = 1.0 - v;
        (1.0 - neg, neg)
    }
}

impl LeadFunction {
    pub fn new(lmax: u32, values: Vec<f64>, counts: Vec<u64>) -> Result<Self> {
        let len = 2 * lmax as usize + 1;
        if values.len() != len || counts.len() != len {
            return Err(Error::InvalidArgument(format!(
                "lead function over lmax={lmax} needs {len} entries"
            )));
        }
        if values.iter().any(|v| !v.is_finite() || !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidArgument("lead function values must lie in [0, 1]".into()));
        }
        Ok(Self { lmax, values, counts })
    }

    pub fn constant(lmax: u32, p: f64) -> Result<Self> {
        let len = 2 * lmax as usize + 1;
        Self::new(lmax, vec![p; len], vec![0; len])
    }

    pub fn from_fn(lmax: u32, f: impl Fn(i64) -> f64) -> Result<Self> {
        let l = lmax as i64;
        let values = (-l..=l).map(f).collect();
        Self::new(lmax, values, vec![0; 2 * lmax as usize + 1])
    }

    /// Antisymmetric function built from its values at `L >= 0`
    /// (`positive[0]` is ignored; `phi(0) = 1/2`).
    pub fn antisymmetric(positive: &[f64], counts: &[u64]) -> Result<Self> {
        let lmax = positive.len().saturating_sub(1);
        let len = 2 * lmax + 1;
        let mut values = vec![0.5; len];
        let mut all_counts = vec![0; len];
        for l in 1..=lmax {
            let (pos, neg) = mirror_pair(positive[l]);
            values[lmax + l] = pos;
            values[lmax - l] = neg;
        }
        for l in 0..=lmax {
            let c = counts.get(l).copied().unwrap_or(0);
            all_counts[lmax + l] = c;
            all_counts[lmax - l] = c;
        }
        Self::new(lmax as u32, values, all_counts)
    }

    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    pub fn at(&self, lead: i64) -> f64 {
        let l = self.lmax as i64;
        self.values[(lead.clamp(-l, l) + l) as usize]
    }

    pub fn count_at(&self, lead: i64) -> u64 {
        let l = self.lmax as i64;
        self.counts[(lead.clamp(-l, l) + l) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `(L, phi(L))` over the whole state range.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let l = self.lmax as i64;
        (-l..=l).zip(self.values.iter().copied())
    }

    pub fn is_antisymmetric(&self) -> bool {
        let l = self.lmax as i64;
        self.at(0) == 0.5 && (1..=l).all(|k| self.at(k) + self.at(-k) == 1.0)
    }
}

/// The estimated lead scoring function with its raw tallies and line fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadScoring {
    pub phi: LeadFunction,
    /// Raw r-frame tallies indexed by `L + lmax`: observations and r wins.
    pub raw_counts: Vec<u64>,
    pub raw_wins: Vec<u64>,
    /// OLS line through the states holding at least `min_count` pooled
    /// observations; `None` if fewer than two such states exist.
    pub fit: Option<LinearFit>,
    pub min_count: u64,
}

/// Tallies, before each event, the r-relative lead (clamped to
/// `[-lmax, lmax]`, first event at `L = 0`) and whether r won the event,
/// then symmetrizes by pooling each observation at `L` with the mirrored
/// one at `-L`. States never observed are filled by linear interpolation in
/// `|L|`, and held flat past the largest observed lead.
///
/// `slope_std_err` of the fit is the OLS standard error scaled by `sqrt(2)`,
/// because each state at `-L` repeats the information at `+L`.
pub fn lead_scoring_function(games: &[GameLog], lmax: u32, min_count: u64) -> Result<LeadScoring> {
    let bound = lmax as i64;
    let len = 2 * lmax as usize + 1;
    let mut raw_counts = vec![0u64; len];
    let mut raw_wins = vec![0u64; len];
    for g in games {
        let mut lead = 0i64;
        for e in &g.events {
            let idx = (lead.clamp(-bound, bound) + bound) as usize;
            raw_counts[idx] += 1;
            if e.team == Team::R {
                raw_wins[idx] += 1;
            }
            lead += e.delta();
        }
    }
    let mid = lmax as usize;
    if raw_counts[mid] == 0 {
        return Err(Error::NoEvents);
    }

    // Pooled tallies for "the team holding a lead of +l".
    let mut pooled_n = vec![0u64; mid + 1];
    let mut estimate: Vec<Option<f64>> = vec![None; mid + 1];
    pooled_n[0] = 2 * raw_counts[mid];
    estimate[0] = Some(0.5);
    for l in 1..=mid {
        let (pos, neg) = (mid + l, mid - l);
        let n = raw_counts[pos] + raw_counts[neg];
        let wins = raw_wins[pos] + (raw_counts[neg] - raw_wins[neg]);
        pooled_n[l] = n;
        if n > 0 {
            estimate[l] = Some(wins as f64 / n as f64);
        }
    }
    let mut positive = vec![0.5; mid + 1];
    let mut last = 0usize;
    for l in 1..=mid {
        if let Some(v) = estimate[l] {
            positive[l] = v;
            if last + 1 < l {
                let (a, b) = (positive[last], v);
                for (k, slot) in positive.iter_mut().enumerate().take(l).skip(last + 1) {
                    let w = (k - last) as f64 / (l - last) as f64;
                    *slot = a + (b - a) * w;
                }
            }
            last = l;
        }
    }
    let edge = positive[last];
    positive[last + 1..].fill(edge);
    let phi = LeadFunction::antisymmetric(&positive, &pooled_n)?;

    let points: Vec<(f64, f64)> = phi
        .iter()
        .filter(|&(l, _)| phi.count_at(l) >= min_count)
        .map(|(l, v)| (l as f64, v))
        .collect();
    let fit = ols(&points).map(|mut f| {
        f.slope_std_err *= core::f64::consts::SQRT_2;
        f
    });
    Ok(LeadScoring {
        phi,
        raw_counts,
        raw_wins,
        fit,
        min_count,
    })
}

/// Relative frequency of each event point value.
pub fn point_value_distribution(games: &[GameLog]) -> Result<Pmf> {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for e in games.iter().flat_map(|g| &g.events) {
        *counts.entry(e.points).or_insert(0) += 1;
    }
    if counts.is_empty() {
        return Err(Error::NoEvents);
    }
    Pmf::from_counts(&counts)
}

/// Per-game fraction of events and of points won by r, aligned by game
/// (games without events are skipped).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceComparison {
    pub events: Vec<f64>,
    pub points: Vec<f64>,
}

pub fn points_fraction_distribution(games: &[GameLog]) -> BalanceComparison {
    let mut events = Vec::new();
    let mut points = Vec::new();
    for g in games {
        if let Some(c) = balance_fraction(g) {
            let total: u64 = g.events.iter().map(|e| e.points as u64).sum();
            let won: u64 = g.events.iter().filter(|e| e.team == Team::R).map(|e| e.points as u64).sum();
            events.push(c);
            points.push(won as f64 / total as f64);
        }
    }
    BalanceComparison { events, points }
}

/// Fitted balance: per-game fractions, lead scoring function, point values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceModel {
    pub c_hat_samples: Vec<f64>,
    pub phi: LeadFunction,
    pub phi_fit: Option<LinearFit>,
    pub point_values: Pmf,
}

impl BalanceModel {
    /// Fair balance with the given point values.
    pub fn fair(lmax: u32, point_values: Pmf) -> Result<Self> {
        Ok(Self {
            c_hat_samples: vec![0.5],
            phi: LeadFunction::constant(lmax, 0.5)?,
            phi_fit: None,
            point_values,
        })
    }
}

pub fn fit_balance(games: &[GameLog], sport: &SportConfig, min_count: u64) -> Result<BalanceModel> {
    crate::types::ensure_sport(games, sport)?;
    let scoring = lead_scoring_function(games, sport.lead_truncation(), min_count)?;
    Ok(BalanceModel {
        c_hat_samples: balance_fractions(games),
        phi: scoring.phi,
        phi_fit: scoring.fit,
        point_values: point_value_distribution(games)?,
    })
}
