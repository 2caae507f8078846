use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmf::{geometric_ccdf, geometric_pmf, poisson_pmf, Pmf};
use crate::types::{ensure_sport, GameLog, SportConfig};

/// Maximum-likelihood Poisson rate, in events per second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonRate {
    pub lambda_hat: f64,
    /// `sqrt(events) / (games * T)`.
    pub std_err: f64,
    pub games: usize,
    pub events: usize,
    pub regulation_length: u32,
    /// Set when no events were observed.
    pub degenerate: bool,
}

impl PoissonRate {
    /// `lambda_hat * T`, the expected number of events per game.
    pub fn events_per_game(&self) -> f64 {
        self.lambda_hat * self.regulation_length as f64
    }

    pub fn mean_gap(&self) -> f64 {
        1.0 / self.lambda_hat
    }
}

/// Rate from corpus totals alone.
pub fn poisson_rate_from_counts(games: usize, events: usize, regulation_length: u32) -> Result<PoissonRate> {
    if games == 0 {
        return Err(Error::EmptyCorpus);
    }
    if regulation_length == 0 {
        return Err(Error::InvalidArgument("regulation length must be positive".into()));
    }
    let per_game = events as f64 / games as f64;
    let t = regulation_length as f64;
    Ok(PoissonRate {
        lambda_hat: per_game / t,
        std_err: libm::sqrt(events as f64) / (games as f64 * t),
        games,
        events,
        regulation_length,
        degenerate: events == 0,
    })
}

pub fn fit_poisson_rate(games: &[GameLog], sport: &SportConfig) -> Result<PoissonRate> {
    ensure_sport(games, sport)?;
    let events = games.iter().map(|g| g.events.len()).sum();
    poisson_rate_from_counts(games.len(), events, sport.regulation_length())
}

/// Empirical events-per-game pmf next to the Poisson(`lambda_hat * T`)
/// reference, both indexed by event count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventsPerGame {
    pub empirical: Vec<f64>,
    pub reference: Vec<f64>,
    pub reference_mean: f64,
}

impl EventsPerGame {
    /// Total-variation distance, counting reference mass beyond the table.
    pub fn total_variation(&self) -> f64 {
        let diff: f64 = self
            .empirical
            .iter()
            .zip(&self.reference)
            .map(|(a, b)| (a - b).abs())
            .sum();
        let tail = (1.0 - self.reference.iter().sum::<f64>()).max(0.0);
        0.5 * (diff + tail)
    }
}

pub fn events_per_game_distribution(games: &[GameLog], sport: &SportConfig) -> Result<EventsPerGame> {
    let rate = fit_poisson_rate(games, sport)?;
    let max_seen = games.iter().map(|g| g.events.len()).max().unwrap_or(0);
    let mean = rate.events_per_game();
    // Extend far enough that the reference tail is negligible.
    let reach = (mean + 12.0 * libm::sqrt(mean) + 12.0) as usize;
    let len = max_seen.max(reach) + 1;
    let mut empirical = vec![0.0; len];
    for g in games {
        empirical[g.events.len()] += 1.0;
    }
    let n = games.len() as f64;
    empirical.iter_mut().for_each(|c| *c /= n);
    Ok(EventsPerGame {
        empirical,
        reference: poisson_pmf(mean, len),
        reference_mean: mean,
    })
}

/// Gaps between consecutive events of one game.
pub fn game_gaps(game: &GameLog) -> impl Iterator<Item = u32> + '_ {
    game.events.windows(2).map(|w| w[1].t - w[0].t)
}

/// Empirical inter-arrival law with its geometric reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterArrival {
    pub empirical: Pmf,
    /// Geometric success probability, `min(lambda_hat, 1)`.
    pub reference_p: f64,
    pub n_gaps: u64,
}

impl InterArrival {
    pub fn reference_pmf(&self, gap: u32) -> f64 {
        geometric_pmf(self.reference_p, gap)
    }

    pub fn reference_mean(&self) -> f64 {
        1.0 / self.reference_p
    }

    pub fn reference_ccdf(&self, gap: u32) -> f64 {
        geometric_ccdf(self.reference_p, gap)
    }

    pub fn empirical_mean(&self) -> f64 {
        self.empirical.mean()
    }

    /// `(gap, Pr(G >= gap))` at every observed gap length.
    pub fn empirical_ccdf(&self) -> Vec<(u32, f64)> {
        let mut remaining = 1.0f64;
        self.empirical
            .iter()
            .map(|(g, p)| {
                let at = remaining.max(0.0);
                remaining -= p;
                (g, at)
            })
            .collect()
    }
}

pub fn interarrival_distribution(games: &[GameLog], sport: &SportConfig) -> Result<InterArrival> {
    let rate = fit_poisson_rate(games, sport)?;
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for g in games {
        for gap in game_gaps(g) {
            *counts.entry(gap).or_insert(0) += 1;
        }
    }
    let n_gaps = counts.values().sum();
    if n_gaps == 0 {
        return Err(Error::NoGaps);
    }
    Ok(InterArrival {
        empirical: Pmf::from_counts(&counts)?,
        reference_p: rate.lambda_hat.min(1.0),
        n_gaps,
    })
}

/// Fraction of games with an event at each second `0..=T`, optionally
/// smoothed by a centered moving average of odd width `window`
/// (1 = raw). Windows are truncated at the ends of the game.
pub fn tempo_profile(games: &[GameLog], sport: &SportConfig, window: usize) -> Result<Vec<f64>> {
    ensure_sport(games, sport)?;
    if games.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidArgument("smoothing window must be odd".into()));
    }
    let len = sport.regulation_length() as usize + 1;
    let mut hits = vec![0u64; len];
    for g in games {
        for e in &g.events {
            if let Some(h) = hits.get_mut(e.t as usize) {
                *h += 1;
            }
        }
    }
    let n = games.len() as f64;
    let raw: Vec<f64> = hits.iter().map(|&h| h as f64 / n).collect();
    if window == 1 {
        return Ok(raw);
    }
    let half = window / 2;
    let mut prefix = vec![0.0; len + 1];
    for (i, v) in raw.iter().enumerate() {
        prefix[i + 1] = prefix[i] + v;
    }
    Ok((0..len)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(len);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect())
}

/// Fitted tempo: rate, per-second profile and inter-arrival law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TempoModel {
    pub lambda_hat: f64,
    pub lambda_std_err: f64,
    pub regulation_length: u32,
    /// `Pr(event at second t)` for `t` in `0..=T`.
    pub profile: Vec<f64>,
    pub interarrival: Pmf,
}

impl TempoModel {
    /// Homogeneous tempo at `lambda` over seconds `1..=T`, so a game holds
    /// `lambda * T` events on average. The inter-arrival law is the matching
    /// geometric with all mass beyond `T` lumped at `T + 1`; any such gap
    /// overshoots regulation, so simulations are unaffected.
    pub fn homogeneous(lambda: f64, regulation_length: u32) -> Result<Self> {
        if !lambda.is_finite() || !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument("rate must lie in [0, 1]".into()));
        }
        let mut profile = vec![lambda; regulation_length as usize + 1];
        profile[0] = 0.0;
        let interarrival = if lambda > 0.0 {
            let mut survive = 1.0;
            let mut entries: Vec<(u32, f64)> = (1..=regulation_length)
                .map(|k| {
                    let p = survive * lambda;
                    survive *= 1.0 - lambda;
                    (k, p)
                })
                .collect();
            entries.push((regulation_length + 1, survive));
            Pmf::new(entries)?
        } else {
            Pmf::point_mass(regulation_length + 1)?
        };
        Ok(Self {
            lambda_hat: lambda,
            lambda_std_err: 0.0,
            regulation_length,
            profile,
            interarrival,
        })
    }
}

pub fn fit_tempo(games: &[GameLog], sport: &SportConfig, window: usize) -> Result<TempoModel> {
    let rate = fit_poisson_rate(games, sport)?;
    if rate.degenerate {
        return Err(Error::NoEvents);
    }
    Ok(TempoModel {
        lambda_hat: rate.lambda_hat,
        lambda_std_err: rate.std_err,
        regulation_length: sport.regulation_length(),
        profile: tempo_profile(games, sport, window)?,
        interarrival: interarrival_distribution(games, sport)?.empirical,
    })
}
