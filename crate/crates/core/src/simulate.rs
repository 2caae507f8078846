//! Monte Carlo games under the Bernoulli/Markov tempo and balance models.
//!
//! Tempo:
//! - [`TempoKind::Bernoulli`]: second `t` hosts an event with probability
//!   `profile[t]`, independently of everything else.
//! - [`TempoKind::Markov`]: gaps are drawn iid from the empirical
//!   inter-arrival law, starting from `t = 0`, until the clock passes `T`.
//!
//! Balance:
//! - [`BalanceKind::Bernoulli`]: each game draws one bias `c` uniformly from
//!   the empirical balance fractions; r wins each event with probability `c`.
//! - [`BalanceKind::Markov`]: r wins with probability `phi(L)` at the current
//!   r-relative lead `L` (clamped to the range of `phi`).
//!
//! Point values are iid from the empirical point-value pmf. Game `i` of a
//! spec always draws from substream `i` of the spec's seed.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{BalanceModel, TempoModel};
use crate::pmf::PmfSampler;
use crate::rng::{substream, Purpose, SimRng};
use crate::types::{GameLog, ScoringEvent, SportConfig, Team};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TempoKind {
    Bernoulli,
    Markov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BalanceKind {
    Bernoulli,
    Markov,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub tempo_kind: TempoKind,
    pub balance_kind: BalanceKind,
    pub tempo: TempoModel,
    pub balance: BalanceModel,
    pub sport: SportConfig,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(
        tempo_kind: TempoKind,
        balance_kind: BalanceKind,
        tempo: TempoModel,
        balance: BalanceModel,
        sport: SportConfig,
        seed: u64,
    ) -> Result<Self> {
        let t = sport.regulation_length();
        if tempo.regulation_length != t || tempo.profile.len() != t as usize + 1 {
            return Err(Error::InvalidArgument(format!(
                "tempo model covers {} seconds, sport needs {}",
                tempo.profile.len(),
                t as usize + 1
            )));
        }
        if tempo.profile.iter().any(|p| !p.is_finite() || !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidArgument("tempo profile entries must lie in [0, 1]".into()));
        }
        if balance_kind == BalanceKind::Bernoulli && balance.c_hat_samples.is_empty() {
            return Err(Error::InvalidArgument("Bernoulli balance needs balance-fraction samples".into()));
        }
        Ok(Self {
            tempo_kind,
            balance_kind,
            tempo,
            balance,
            sport,
            seed,
        })
    }

    /// The ideal competition: homogeneous tempo at `lambda`, fair winners,
    /// the sport's point values.
    pub fn ideal(sport: &SportConfig, lambda: f64, seed: u64) -> Result<Self> {
        Self::new(
            TempoKind::Bernoulli,
            BalanceKind::Bernoulli,
            TempoModel::homogeneous(lambda, sport.regulation_length())?,
            BalanceModel::fair(sport.lead_truncation(), sport.point_values().clone())?,
            sport.clone(),
            seed,
        )
    }
}

/// Per-second event times drawn by thinning: candidate seconds arrive as a
/// Bernoulli(`p_max`) process and survive with `profile[t] / p_max`, which is
/// the same law as an independent Bernoulli(`profile[t]`) trial per second.
pub(crate) struct SecondSampler<'a> {
    profile: &'a [f64],
    p_max: f64,
    skip: Option<Geometric>,
}

impl<'a> SecondSampler<'a> {
    pub(crate) fn new(profile: &'a [f64]) -> Self {
        let p_max = profile.iter().copied().fold(0.0, f64::max);
        let skip = (p_max > 0.0).then(|| Geometric::new(p_max).expect("p_max in (0, 1]"));
        Self { profile, p_max, skip }
    }

    pub(crate) fn for_each<R: Rng + ?Sized>(&self, rng: &mut R, mut f: impl FnMut(&mut R, u32)) {
        let Some(skip) = &self.skip else { return };
        let len = self.profile.len() as u64;
        let mut t = 0u64;
        loop {
            t = t.saturating_add(skip.sample(rng));
            if t >= len {
                return;
            }
            let p = self.profile[t as usize];
            if p >= self.p_max || rng.random::<f64>() * self.p_max < p {
                f(rng, t as u32);
            }
            t += 1;
        }
    }
}

/// A [`ModelSpec`] with its samplers built once.
pub struct Simulator<'a> {
    spec: &'a ModelSpec,
    seconds: SecondSampler<'a>,
    gaps: PmfSampler<'a>,
    points: PmfSampler<'a>,
}

impl<'a> Simulator<'a> {
    pub fn new(spec: &'a ModelSpec) -> Self {
        Self {
            spec,
            seconds: SecondSampler::new(&spec.tempo.profile),
            gaps: spec.tempo.interarrival.sampler(),
            points: spec.balance.point_values.sampler(),
        }
    }

    pub fn spec(&self) -> &ModelSpec {
        self.spec
    }

    pub fn game(&self, index: u64) -> GameLog {
        let spec = self.spec;
        let mut rng = substream(spec.seed, Purpose::Simulate, index);
        let bias = match spec.balance_kind {
            BalanceKind::Bernoulli => {
                let samples = &spec.balance.c_hat_samples;
                Some(samples[rng.random_range(0..samples.len())])
            }
            BalanceKind::Markov => None,
        };
        let mut events = Vec::new();
        let mut lead = 0i64;
        let mut emit = |rng: &mut SimRng, t: u32| {
            let p_r = bias.unwrap_or_else(|| spec.balance.phi.at(lead));
            let team = if rng.random::<f64>() < p_r { Team::R } else { Team::B };
            let e = ScoringEvent::new(t, team, self.points.sample(rng));
            lead += e.delta();
            events.push(e);
        };
        match spec.tempo_kind {
            TempoKind::Bernoulli => self.seconds.for_each(&mut rng, emit),
            TempoKind::Markov => {
                let end = spec.sport.regulation_length() as u64;
                let mut t = 0u64;
                loop {
                    t += self.gaps.sample(&mut rng) as u64;
                    if t > end {
                        break;
                    }
                    emit(&mut rng, t as u32);
                }
            }
        }
        GameLog::new(format!("sim-{index}"), spec.sport.sport().clone(), events)
    }
}

pub fn simulate_game(spec: &ModelSpec, index: u64) -> GameLog {
    Simulator::new(spec).game(index)
}

pub fn simulate_corpus(spec: &ModelSpec, n_games: usize) -> Vec<GameLog> {
    let sim = Simulator::new(spec);
    (0..n_games as u64).map(|i| sim.game(i)).collect()
}

/// One game of the ideal competition at rate `lambda`.
pub fn ideal_game(sport: &SportConfig, lambda: f64, seed: u64, index: u64) -> Result<GameLog> {
    Ok(simulate_game(&ModelSpec::ideal(sport, lambda, seed)?, index))
}

/// Dispersion of the lead across games at one clock second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadSpread {
    pub t: u32,
    /// Population standard deviation of `L`.
    pub sd: f64,
    pub mean_abs: f64,
}

/// Integer sufficient statistics of `L(t)` at fixed sample seconds; merges
/// are exact and order-independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadAccumulator {
    times: Vec<u32>,
    sum: Vec<i64>,
    sum_sq: Vec<u64>,
    sum_abs: Vec<u64>,
    games: u64,
}

impl SpreadAccumulator {
    /// Samples `0, s, 2s, ...` and always `T`.
    pub fn new(regulation_length: u32, sample_every: u32) -> Result<Self> {
        if sample_every == 0 {
            return Err(Error::InvalidArgument("sample interval must be positive".into()));
        }
        let mut times: Vec<u32> = (0..=regulation_length).step_by(sample_every as usize).collect();
        if times.last() != Some(&regulation_length) {
            times.push(regulation_length);
        }
        let n = times.len();
        Ok(Self {
            times,
            sum: vec![0; n],
            sum_sq: vec![0; n],
            sum_abs: vec![0; n],
            games: 0,
        })
    }

    pub fn add_game(&mut self, game: &GameLog) {
        let mut lead = 0i64;
        let mut next = 0;
        for (i, &t) in self.times.iter().enumerate() {
            while next < game.events.len() && game.events[next].t <= t {
                lead += game.events[next].delta();
                next += 1;
            }
            self.sum[i] += lead;
            self.sum_sq[i] += (lead * lead) as u64;
            self.sum_abs[i] += lead.unsigned_abs();
        }
        self.games += 1;
    }

    pub fn merge(&mut self, other: &SpreadAccumulator) {
        assert_eq!(self.times, other.times, "accumulators sample different seconds");
        for i in 0..self.times.len() {
            self.sum[i] += other.sum[i];
            self.sum_sq[i] += other.sum_sq[i];
            self.sum_abs[i] += other.sum_abs[i];
        }
        self.games += other.games;
    }

    pub fn games(&self) -> u64 {
        self.games
    }

    pub fn finish(&self) -> Vec<LeadSpread> {
        let n = self.games.max(1) as f64;
        self.times
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let mean = self.sum[i] as f64 / n;
                let var = (self.sum_sq[i] as f64 / n - mean * mean).max(0.0);
                LeadSpread {
                    t,
                    sd: libm::sqrt(var),
                    mean_abs: self.sum_abs[i] as f64 / n,
                }
            })
            .collect()
    }
}

pub const MIN_CURVE_GAMES: usize = 1_000;

/// Lead dispersion over clock time for `n_games` simulated games.
pub fn lead_variance_curve(spec: &ModelSpec, n_games: usize, sample_every: u32) -> Result<Vec<LeadSpread>> {
    if n_games < MIN_CURVE_GAMES {
        return Err(Error::TooFew {
            what: "games",
            needed: MIN_CURVE_GAMES,
            got: n_games,
        });
    }
    let mut acc = SpreadAccumulator::new(spec.sport.regulation_length(), sample_every)?;
    let sim = Simulator::new(spec);
    for i in 0..n_games as u64 {
        acc.add_game(&sim.game(i));
    }
    Ok(acc.finish())
}

/// The same curve measured on observed games.
pub fn empirical_lead_variance(games: &[GameLog], sport: &SportConfig, sample_every: u32) -> Result<Vec<LeadSpread>> {
    crate::types::ensure_sport(games, sport)?;
    if games.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut acc = SpreadAccumulator::new(sport.regulation_length(), sample_every)?;
    games.iter().for_each(|g| acc.add_game(g));
    Ok(acc.finish())
}
