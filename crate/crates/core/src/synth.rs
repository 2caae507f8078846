//! Synthetic leagues with known ground truth.
//!
//! Each event of a matchup between teams `i` (as r) and `j` (as b) goes to
//! `i` with probability `skill_i / (skill_i + skill_j)`. The restoring
//! variant ignores skills and gives r the event with probability
//! `1/2 + slope * L`, clamped to `[EPSILON, 1 - EPSILON]`.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::TempoModel;
use crate::pmf::Pmf;
use crate::rng::{substream, Purpose};
use crate::simulate::SecondSampler;
use crate::types::{reference_rate, GameLog, ScoringEvent, SportConfig, Team};

/// Probability clamp for lead-dependent winners.
pub const EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TempoLaw {
    /// Homogeneous rate over seconds `1..=T`.
    Flat { lambda: f64 },
    /// Per-second event probabilities over `0..=T`.
    Profile(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeagueSpec {
    pub sport: SportConfig,
    pub skills: Vec<f64>,
    /// `(r, b)` team indices per game.
    pub schedule: Vec<(usize, usize)>,
    pub tempo: TempoLaw,
    pub points: Pmf,
    pub seed: u64,
}

/// Sidecar describing how a synthetic corpus was generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub league: LeagueSpec,
    pub restoring_slope: Option<f64>,
}

impl LeagueSpec {
    fn profile(&self) -> Result<Vec<f64>> {
        let t = self.sport.regulation_length();
        match &self.tempo {
            TempoLaw::Flat { lambda } => Ok(TempoModel::homogeneous(*lambda, t)?.profile),
            TempoLaw::Profile(p) => {
                if p.len() != t as usize + 1 {
                    return Err(Error::InvalidArgument(format!("tempo profile needs {} entries", t + 1)));
                }
                if p.iter().any(|v| !v.is_finite() || !(0.0..=1.0).contains(v)) {
                    return Err(Error::InvalidArgument("tempo profile entries must lie in [0, 1]".into()));
                }
                Ok(p.clone())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.skills.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(Error::InvalidArgument("skills must be positive".into()));
        }
        if self.schedule.is_empty() {
            return Err(Error::InvalidArgument("schedule is empty".into()));
        }
        let n = self.skills.len();
        if let Some(&(i, j)) = self.schedule.iter().find(|&&(i, j)| i >= n || j >= n || i == j) {
            return Err(Error::InvalidArgument(format!("bad matchup ({i}, {j}) for {n} teams")));
        }
        self.profile().map(|_| ())
    }

    /// Two teams with skill ratio `ratio : 1`, the stronger always listed
    /// as r.
    pub fn two_team(sport: &SportConfig, ratio: f64, games: usize, lambda: f64, seed: u64) -> Self {
        Self {
            sport: sport.clone(),
            skills: alloc::vec![ratio, 1.0],
            schedule: alloc::vec![(0, 1); games],
            tempo: TempoLaw::Flat { lambda },
            points: sport.point_values().clone(),
            seed,
        }
    }

    /// `n_teams` teams with log-normal skills (log-scale sd `sigma`), and
    /// `n_games` uniformly random distinct pairings, at the sport's
    /// reference tempo.
    pub fn random_league(sport: &SportConfig, n_teams: usize, n_games: usize, sigma: f64, seed: u64) -> Result<Self> {
        let lambda = reference_rate(sport.sport())
            .ok_or_else(|| Error::InvalidArgument(format!("no reference tempo for {}", sport.sport())))?;
        Self::random_league_at(sport, n_teams, n_games, sigma, lambda, seed)
    }

    pub fn random_league_at(
        sport: &SportConfig,
        n_teams: usize,
        n_games: usize,
        sigma: f64,
        lambda: f64,
        seed: u64,
    ) -> Result<Self> {
        if n_teams < 2 {
            return Err(Error::InvalidArgument("need at least two teams".into()));
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::InvalidArgument(format!("skill spread {sigma} must be finite and non-negative")));
        }
        let dist = LogNormal::new(0.0, sigma).map_err(|e| Error::InvalidArgument(format!("{e}")))?;
        let mut rng = substream(seed, Purpose::Skills, 0);
        let skills = (0..n_teams).map(|_| dist.sample(&mut rng)).collect();
        let schedule = (0..n_games)
            .map(|_| {
                let i = rng.random_range(0..n_teams);
                let j = (i + rng.random_range(1..n_teams)) % n_teams;
                (i, j)
            })
            .collect();
        Ok(Self {
            sport: sport.clone(),
            skills,
            schedule,
            tempo: TempoLaw::Flat { lambda },
            points: sport.point_values().clone(),
            seed,
        })
    }

    /// Desk-scale default: 20 teams, broad log-normal skills, 1,000 games.
    pub fn desk_scale(sport: &SportConfig, seed: u64) -> Result<Self> {
        Self::random_league(sport, 20, 1_000, 1.0, seed)
    }
}

fn generate(spec: &LeagueSpec, mut p_r: impl FnMut(usize, i64) -> f64) -> Result<Vec<GameLog>> {
    spec.validate()?;
    let profile = spec.profile()?;
    let seconds = SecondSampler::new(&profile);
    let points = spec.points.sampler();
    Ok(spec
        .schedule
        .iter()
        .enumerate()
        .map(|(g, _)| {
            let mut rng = substream(spec.seed, Purpose::League, g as u64);
            let mut lead = 0i64;
            let mut events = Vec::new();
            seconds.for_each(&mut rng, |rng, t| {
                let team = if rng.random::<f64>() < p_r(g, lead) { Team::R } else { Team::B };
                let e = ScoringEvent::new(t, team, points.sample(rng));
                lead += e.delta();
                events.push(e);
            });
            GameLog::new(format!("g{g}"), spec.sport.sport().clone(), events)
        })
        .collect())
}

pub fn generate_league(spec: &LeagueSpec) -> Result<Vec<GameLog>> {
    generate(spec, |g, _| {
        let (i, j) = spec.schedule[g];
        spec.skills[i] / (spec.skills[i] + spec.skills[j])
    })
}

/// League whose event winners follow a lead-dependent probability. `slope`
/// must keep `1/2 + slope * L` strictly inside `(0, 1)` over the sport's
/// `[-lmax, lmax]`.
pub fn generate_restoring_league(spec: &LeagueSpec, slope: f64) -> Result<Vec<GameLog>> {
    if !slope.is_finite() {
        return Err(Error::NonFinite("restoring slope"));
    }
    let reach = slope.abs() * spec.sport.lead_truncation() as f64;
    if reach >= 0.5 {
        return Err(Error::InvalidArgument(format!(
            "slope {slope} leaves (0, 1) within lead {}",
            spec.sport.lead_truncation()
        )));
    }
    generate(spec, |_, lead| (0.5 + slope * lead as f64).clamp(EPSILON, 1.0 - EPSILON))
}
