use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::chain::{build_chain, expected_remaining_events, leader_wins, LeaderCall};
use crate::error::{Error, Result};
use crate::estimate::{lead_scoring_function, point_value_distribution, tempo_profile, DEFAULT_MIN_STATE_COUNT};
use crate::rng::{substream, Purpose};
use crate::types::{ensure_sport, GameLog, SportConfig, Team};

/// How games tied at the end of regulation enter the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieMode {
    /// Tied games are not scored.
    Exclude,
    /// Tied games score 1/2 for every prediction.
    HalfCredit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub splits: usize,
    pub train_fraction: f64,
    pub seed: u64,
    /// Minimum pooled count for a lead state to enter the scoring-function fit.
    pub min_count: u64,
    pub tie_mode: TieMode,
    /// Caps the reported event indices.
    pub max_event_index: Option<usize>,
    /// Chain truncation; defaults to the sport's.
    pub lmax: Option<u32>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            splits: 20,
            train_fraction: 0.75,
            seed: 0,
            min_count: DEFAULT_MIN_STATE_COUNT,
            tie_mode: TieMode::Exclude,
            max_event_index: None,
            lmax: None,
        }
    }
}

/// Score sums of one random split, indexed by `event_index - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitScores {
    pub chain: Vec<f64>,
    pub leader: Vec<f64>,
    pub games: Vec<u64>,
    /// Scores at each game's own last event.
    pub final_chain: f64,
    pub final_leader: f64,
    pub final_games: u64,
}

fn winner(game: &GameLog) -> Option<Team> {
    match game.final_lead().signum() {
        1 => Some(Team::R),
        -1 => Some(Team::B),
        _ => None,
    }
}

/// Fits the chain on a random `train_fraction` of games and scores both
/// predictors on the rest, after every event of every test game.
pub fn evaluate_split(games: &[GameLog], sport: &SportConfig, cfg: &EvalConfig, split: usize) -> Result<SplitScores> {
    ensure_sport(games, sport)?;
    if games.len() < 2 {
        return Err(Error::TooFew {
            what: "games",
            needed: 2,
            got: games.len(),
        });
    }
    if !(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0) {
        return Err(Error::InvalidArgument("train fraction must lie in (0, 1)".into()));
    }
    let mut order: Vec<usize> = (0..games.len()).collect();
    order.shuffle(&mut substream(cfg.seed, Purpose::Split, split as u64));
    let n_train = libm::round(cfg.train_fraction * games.len() as f64).clamp(1.0, (games.len() - 1) as f64) as usize;
    let train: Vec<GameLog> = order[..n_train].iter().map(|&i| games[i].clone()).collect();

    let profile = tempo_profile(&train, sport, 1)?;
    let points = point_value_distribution(&train)?;
    let lmax = cfg.lmax.unwrap_or(sport.lead_truncation()).max(points.max_value());
    let scoring = lead_scoring_function(&train, lmax, cfg.min_count)?;
    let chain = build_chain(&scoring.phi, &points, lmax)?;
    // Chain applications remaining after each clock second.
    let steps = (0..profile.len() as u32)
        .map(|t| expected_remaining_events(&profile, t).map(|n| libm::round(n) as usize))
        .collect::<Result<Vec<_>>>()?;
    let table = chain.outcome_table(steps.iter().copied().max().unwrap_or(0));
    let call_chain = |lead: i64, t: u32| -> Result<LeaderCall> {
        let k = *steps.get(t as usize).ok_or(Error::OutOfRange {
            what: "t",
            value: t as i64,
            lo: 0,
            hi: profile.len() as i64 - 1,
        })?;
        Ok(LeaderCall::from(table.get(lead, k)?.favored()))
    };

    let mut out = SplitScores {
        chain: Vec::new(),
        leader: Vec::new(),
        games: Vec::new(),
        final_chain: 0.0,
        final_leader: 0.0,
        final_games: 0,
    };
    for &i in &order[n_train..] {
        let game = &games[i];
        let result = winner(game);
        if result.is_none() && cfg.tie_mode == TieMode::Exclude {
            continue;
        }
        if game.events.len() > out.games.len() {
            out.chain.resize(game.events.len(), 0.0);
            out.leader.resize(game.events.len(), 0.0);
            out.games.resize(game.events.len(), 0);
        }
        let mut lead = 0i64;
        for (k, e) in game.events.iter().enumerate() {
            lead += e.delta();
            let (c, l) = match result {
                Some(w) => (call_chain(lead, e.t)?.score(w), leader_wins(lead).score(w)),
                None => (0.5, 0.5),
            };
            out.chain[k] += c;
            out.leader[k] += l;
            out.games[k] += 1;
            if k + 1 == game.events.len() {
                out.final_chain += c;
                out.final_leader += l;
                out.final_games += 1;
            }
        }
    }
    if out.final_games == 0 {
        return Err(Error::AllTestGamesTied);
    }
    Ok(out)
}

/// Outcome predictability after the `event_index`-th event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AucRow {
    pub event_index: usize,
    pub auc_chain: f64,
    pub auc_leader: f64,
    /// Scored (game, split) pairs.
    pub n_games_scored: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predictability {
    /// One row per event index; every split scores at least one game at
    /// each reported index.
    pub rows: Vec<AucRow>,
    /// Scores at each test game's final event (`event_index` is 0).
    pub final_event: AucRow,
    pub splits: usize,
}

/// Averages per-split mean scores with equal weight per split.
pub fn merge_splits(splits: &[SplitScores], cfg: &EvalConfig) -> Result<Predictability> {
    if splits.is_empty() {
        return Err(Error::TooFew {
            what: "splits",
            needed: 1,
            got: 0,
        });
    }
    let mut depth = splits
        .iter()
        .map(|s| s.games.iter().take_while(|&&n| n > 0).count())
        .min()
        .unwrap_or(0);
    if let Some(cap) = cfg.max_event_index {
        depth = depth.min(cap);
    }
    let m = splits.len() as f64;
    let rows = (0..depth)
        .map(|k| AucRow {
            event_index: k + 1,
            auc_chain: splits.iter().map(|s| s.chain[k] / s.games[k] as f64).sum::<f64>() / m,
            auc_leader: splits.iter().map(|s| s.leader[k] / s.games[k] as f64).sum::<f64>() / m,
            n_games_scored: splits.iter().map(|s| s.games[k]).sum(),
        })
        .collect();
    let final_event = AucRow {
        event_index: 0,
        auc_chain: splits.iter().map(|s| s.final_chain / s.final_games as f64).sum::<f64>() / m,
        auc_leader: splits.iter().map(|s| s.final_leader / s.final_games as f64).sum::<f64>() / m,
        n_games_scored: splits.iter().map(|s| s.final_games).sum(),
    };
    Ok(Predictability {
        rows,
        final_event,
        splits: splits.len(),
    })
}

/// Repeated random-split evaluation of the lead chain against the
/// leader-wins heuristic.
pub fn evaluate_predictability(games: &[GameLog], sport: &SportConfig, cfg: &EvalConfig) -> Result<Predictability> {
    if cfg.splits == 0 {
        return Err(Error::InvalidArgument("at least one split required".into()));
    }
    let splits = (0..cfg.splits)
        .map(|s| evaluate_split(games, sport, cfg, s))
        .collect::<Result<Vec<_>>>()?;
    merge_splits(&splits, cfg)
}
