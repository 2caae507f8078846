//! Raw records to validated game logs.
//!
//! Record-level preprocessing: overtime events (`t > T`) are dropped, and all
//! records of one game at the same second are netted into at most one event
//! (points summed per team, then the smaller total subtracted from the
//! larger). A second where both teams score equally produces no event.
//!
//! A zero-point record contributes no event but still declares its game, so
//! games without scoring survive a write/read cycle: [`to_records`] emits
//! one `(r, t = 0, points = 0)` marker for each of them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::IngestError;
use crate::types::{GameLog, ScoringEvent, SportConfig, SportId, Team};

/// One unvalidated row of an event file. `line` is the 1-based source line
/// used in error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEventRecord {
    pub line: usize,
    pub sport: String,
    pub game_id: String,
    pub team: String,
    pub t: i64,
    pub points: i64,
}

/// Sport configurations known to the ingest step.
#[derive(Debug, Clone)]
pub struct SportRegistry {
    configs: BTreeMap<SportId, SportConfig>,
}

impl Default for SportRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl SportRegistry {
    pub fn builtin() -> Self {
        let configs = SportId::BUILTIN
            .iter()
            .filter_map(|id| SportConfig::builtin(id).map(|c| (id.clone(), c)))
            .collect();
        Self { configs }
    }

    pub fn empty() -> Self {
        Self {
            configs: BTreeMap::new(),
        }
    }

    /// Adds or replaces a configuration.
    pub fn register(&mut self, config: SportConfig) {
        self.configs.insert(config.sport().clone(), config);
    }

    pub fn get(&self, sport: &SportId) -> Option<&SportConfig> {
        self.configs.get(sport)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SportConfig> {
        self.configs.values()
    }
}

fn fail(line: usize, field: &'static str, message: impl Into<String>) -> IngestError {
    IngestError {
        line,
        field,
        message: message.into(),
    }
}

/// Groups records into one [`GameLog`] per distinct `game_id`, in order of
/// first appearance.
pub fn assemble_games(
    records: impl IntoIterator<Item = RawEventRecord>,
    registry: &SportRegistry,
) -> Result<Vec<GameLog>, IngestError> {
    struct Pending<'a> {
        id: String,
        sport: &'a SportConfig,
        seconds: BTreeMap<u32, [u64; 2]>,
    }
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut pending: Vec<Pending<'_>> = Vec::new();

    for rec in records {
        let line = rec.line;
        let sport_id: SportId = rec
            .sport
            .parse()
            .map_err(|_| fail(line, "sport", "empty sport tag"))?;
        let sport = registry
            .get(&sport_id)
            .ok_or_else(|| fail(line, "sport", format!("unknown sport tag {:?}", rec.sport)))?;
        if rec.game_id.is_empty() {
            return Err(fail(line, "game_id", "empty game id"));
        }
        let team: Team = rec.team.parse().map_err(|m: String| fail(line, "team", m))?;
        if rec.t < 0 {
            return Err(fail(line, "t", format!("negative time {}", rec.t)));
        }
        if rec.points < 0 {
            return Err(fail(line, "points", format!("negative points {}", rec.points)));
        }

        let slot = match index.get(&rec.game_id) {
            Some(&i) => i,
            None => {
                index.insert(rec.game_id.clone(), pending.len());
                pending.push(Pending {
                    id: rec.game_id.clone(),
                    sport,
                    seconds: BTreeMap::new(),
                });
                pending.len() - 1
            }
        };
        let game = &mut pending[slot];
        if game.sport.sport() != sport.sport() {
            return Err(fail(
                line,
                "sport",
                format!("game {} already tagged {}", game.id, game.sport.sport()),
            ));
        }
        if rec.t > sport.regulation_length() as i64 || rec.points == 0 {
            continue;
        }
        let totals = game.seconds.entry(rec.t as u32).or_insert([0, 0]);
        totals[team as usize] += rec.points as u64;
    }

    Ok(pending
        .into_iter()
        .map(|p| {
            let events = p
                .seconds
                .into_iter()
                .filter_map(|(t, [r, b])| match r.cmp(&b) {
                    core::cmp::Ordering::Greater => Some(ScoringEvent::new(t, Team::R, (r - b) as u32)),
                    core::cmp::Ordering::Less => Some(ScoringEvent::new(t, Team::B, (b - r) as u32)),
                    core::cmp::Ordering::Equal => None,
                })
                .collect();
            GameLog::new(p.id, p.sport.sport().clone(), events)
        })
        .collect())
}

/// Flattens games back into canonical records (games in order, events in
/// time order, a zero-point marker for a game without events). Lines are
/// numbered as if preceded by a header row.
pub fn to_records(games: &[GameLog]) -> Vec<RawEventRecord> {
    let marker = [ScoringEvent::new(0, Team::R, 0)];
    games
        .iter()
        .flat_map(|g| {
            let events = if g.events.is_empty() { &marker[..] } else { &g.events[..] };
            events.iter().map(move |e| (g, e))
        })
        .enumerate()
        .map(|(i, (g, e))| RawEventRecord {
            line: i + 2,
            sport: g.sport.as_str().into(),
            game_id: g.game_id.clone(),
            team: e.team.as_str().into(),
            t: e.t as i64,
            points: e.points as i64,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SportSummary {
    pub sport: SportId,
    pub games: usize,
    pub events: usize,
    pub mean_events_per_game: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameFailure {
    pub game_id: String,
    pub reason: String,
}

/// Corpus-level counts, broken down per sport.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub games: usize,
    pub events: usize,
    pub mean_events_per_game: f64,
    pub per_sport: Vec<SportSummary>,
    pub failures: Vec<GameFailure>,
}

fn ratio(events: usize, games: usize) -> f64 {
    if games == 0 {
        0.0
    } else {
        events as f64 / games as f64
    }
}

pub fn validate_corpus(games: &[GameLog], registry: &SportRegistry) -> CorpusReport {
    let mut per_sport: BTreeMap<SportId, (usize, usize)> = BTreeMap::new();
    let mut failures = Vec::new();
    for g in games {
        let entry = per_sport.entry(g.sport.clone()).or_default();
        entry.0 += 1;
        entry.1 += g.events.len();
        let verdict = match registry.get(&g.sport) {
            Some(cfg) => g.check(cfg),
            None => Err(format!("unknown sport {}", g.sport)),
        };
        if let Err(reason) = verdict {
            failures.push(GameFailure {
                game_id: g.game_id.clone(),
                reason,
            });
        }
    }
    let events: usize = games.iter().map(|g| g.events.len()).sum();
    CorpusReport {
        games: games.len(),
        events,
        mean_events_per_game: ratio(events, games.len()),
        per_sport: per_sport
            .into_iter()
            .map(|(sport, (g, e))| SportSummary {
                sport,
                games: g,
                events: e,
                mean_events_per_game: ratio(e, g),
            })
            .collect(),
        failures,
    }
}
