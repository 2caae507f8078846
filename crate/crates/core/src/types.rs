//! Domain types shared by every module.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pmf::Pmf;

/// Which sport a configuration or game log belongs to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SportId {
    Cfb,
    Nfl,
    Nhl,
    Nba,
    /// A user-defined sport, identified by its lowercase tag.
    Custom(String),
}

impl SportId {
    pub fn as_str(&self) -> &str {
        match self {
            SportId::Cfb => "cfb",
            SportId::Nfl => "nfl",
            SportId::Nhl => "nhl",
            SportId::Nba => "nba",
            SportId::Custom(name) => name,
        }
    }

    pub const BUILTIN: [SportId; 4] = [SportId::Cfb, SportId::Nfl, SportId::Nhl, SportId::Nba];
}

impl FromStr for SportId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tag = s.trim().to_ascii_lowercase();
        Ok(match tag.as_str() {
            "cfb" => SportId::Cfb,
            "nfl" => SportId::Nfl,
            "nhl" => SportId::Nhl,
            "nba" => SportId::Nba,
            "" => return Err(Error::InvalidConfig("empty sport tag".into())),
            _ => SportId::Custom(tag),
        })
    }
}

impl fmt::Display for SportId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for SportId {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for SportId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Events-per-second rate for each built-in sport.
pub fn reference_rate(sport: &SportId) -> Option<f64> {
    match sport {
        SportId::Nfl => Some(0.00204),
        SportId::Cfb => Some(0.00230),
        SportId::Nhl => Some(0.00106),
        SportId::Nba => Some(0.03194),
        SportId::Custom(_) => None,
    }
}

/// Static description of a sport.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SportConfigFields", into = "SportConfigFields")]
pub struct SportConfig {
    sport: SportId,
    regulation_length: u32,
    period_ends: Vec<u32>,
    point_values: Pmf,
    lead_truncation: u32,
}

#[derive(Serialize, Deserialize)]
struct SportConfigFields {
    sport: SportId,
    regulation_length: u32,
    period_ends: Vec<u32>,
    point_values: Pmf,
    lead_truncation: u32,
}

impl TryFrom<SportConfigFields> for SportConfig {
    type Error = Error;

    fn try_from(f: SportConfigFields) -> Result<Self> {
        SportConfig::new(f.sport, f.regulation_length, f.period_ends, f.point_values, f.lead_truncation)
    }
}

impl From<SportConfig> for SportConfigFields {
    fn from(c: SportConfig) -> Self {
        SportConfigFields {
            sport: c.sport,
            regulation_length: c.regulation_length,
            period_ends: c.period_ends,
            point_values: c.point_values,
            lead_truncation: c.lead_truncation,
        }
    }
}

impl SportConfig {
    pub fn new(
        sport: SportId,
        regulation_length: u32,
        period_ends: Vec<u32>,
        point_values: Pmf,
        lead_truncation: u32,
    ) -> Result<Self> {
        if regulation_length == 0 {
            return Err(Error::InvalidConfig("regulation length must be positive".into()));
        }
        if period_ends.windows(2).any(|w| w[0] >= w[1]) || period_ends.first() == Some(&0) {
            return Err(Error::InvalidConfig("period ends must be strictly ascending and positive".into()));
        }
        if period_ends.last() != Some(&regulation_length) {
            return Err(Error::InvalidConfig(format!(
                "last period end must equal regulation length {regulation_length}"
            )));
        }
        if lead_truncation < point_values.max_value() {
            return Err(Error::InvalidConfig(format!(
                "lead truncation {lead_truncation} below max point value {}",
                point_values.max_value()
            )));
        }
        Ok(Self {
            sport,
            regulation_length,
            period_ends,
            point_values,
            lead_truncation,
        })
    }

    /// Built-in configuration for one of the four reference sports.
    pub fn builtin(sport: &SportId) -> Option<Self> {
        let quarters = |t: u32| vec![t / 4, t / 2, 3 * t / 4, t];
        let football = |cfb: bool| {
            if cfb {
                [(2, 0.0113), (3, 0.1702), (6, 0.0708), (7, 0.7058), (8, 0.0419)]
            } else {
                [(2, 0.0083), (3, 0.3055), (6, 0.0308), (7, 0.6222), (8, 0.0332)]
            }
        };
        let (t, periods, points, lmax) = match sport {
            SportId::Cfb => (3600, quarters(3600), Pmf::new(football(true)), 100),
            SportId::Nfl => (3600, quarters(3600), Pmf::new(football(false)), 100),
            SportId::Nhl => (3600, vec![1200, 2400, 3600], Pmf::point_mass(1), 15),
            SportId::Nba => (
                2880,
                quarters(2880),
                Pmf::new([
                    (1, 0.0941),
                    (2, 0.7373),
                    (3, 0.1647),
                    (4, 0.0029),
                    (5, 0.0009),
                    (6, 0.0001),
                ]),
                100,
            ),
            SportId::Custom(_) => return None,
        };
        Some(Self::new(sport.clone(), t, periods, points.ok()?, lmax).expect("built-in config is valid"))
    }

    pub fn sport(&self) -> &SportId {
        &self.sport
    }

    /// Regulation length `T` in seconds; clock seconds run over `0..=T`.
    pub fn regulation_length(&self) -> u32 {
        self.regulation_length
    }

    pub fn period_ends(&self) -> &[u32] {
        &self.period_ends
    }

    pub fn point_values(&self) -> &Pmf {
        &self.point_values
    }

    pub fn lead_truncation(&self) -> u32 {
        self.lead_truncation
    }

    pub fn with_lead_truncation(mut self, lmax: u32) -> Result<Self> {
        if lmax < self.point_values.max_value() {
            return Err(Error::InvalidConfig(format!("lead truncation {lmax} below max point value")));
        }
        self.lead_truncation = lmax;
        Ok(self)
    }

    pub fn with_point_values(mut self, points: Pmf) -> Result<Self> {
        if self.lead_truncation < points.max_value() {
            return Err(Error::InvalidConfig("lead truncation below max point value".into()));
        }
        self.point_values = points;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Team {
    R,
    B,
}

impl Team {
    pub fn other(self) -> Team {
        match self {
            Team::R => Team::B,
            Team::B => Team::R,
        }
    }

    /// +1 for r, -1 for b.
    pub fn sign(self) -> i64 {
        match self {
            Team::R => 1,
            Team::B => -1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Team::R => "r",
            Team::B => "b",
        }
    }
}

impl FromStr for Team {
    type Err = String;

    /// Accepts `r`/`b` and maps `home`/`away` onto them.
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "r" | "home" => Ok(Team::R),
            "b" | "away" => Ok(Team::B),
            other => Err(format!("unknown team tag {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoringEvent {
    pub t: u32,
    pub team: Team,
    pub points: u32,
}

impl ScoringEvent {
    pub fn new(t: u32, team: Team, points: u32) -> Self {
        Self { t, team, points }
    }

    /// Signed change of the r-relative lead.
    pub fn delta(&self) -> i64 {
        self.team.sign() * self.points as i64
    }
}

/// One game's regulation scoring events, strictly increasing in time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameLog {
    pub game_id: String,
    pub sport: SportId,
    pub events: Vec<ScoringEvent>,
}

impl GameLog {
    pub fn new(game_id: impl Into<String>, sport: SportId, events: Vec<ScoringEvent>) -> Self {
        Self {
            game_id: game_id.into(),
            sport,
            events,
        }
    }

    /// Checks the log against `T`: events inside `[0, T]`, strictly
    /// increasing times, positive point values.
    pub fn check(&self, sport: &SportConfig) -> core::result::Result<(), String> {
        if &self.sport != sport.sport() {
            return Err(format!("sport {} does not match {}", self.sport, sport.sport()));
        }
        if let Some(e) = self.events.iter().find(|e| e.t > sport.regulation_length()) {
            return Err(format!("event at t={} after regulation end", e.t));
        }
        if let Some(e) = self.events.iter().find(|e| e.points == 0) {
            return Err(format!("zero-point event at t={}", e.t));
        }
        if let Some(w) = self.events.windows(2).find(|w| w[0].t >= w[1].t) {
            return Err(format!("event times not strictly increasing at t={}", w[1].t));
        }
        Ok(())
    }

    /// `S_r(t) - S_b(t)`, counting every event with time `<= t`.
    pub fn lead_at(&self, sport: &SportConfig, t: u32) -> Result<i64> {
        let end = sport.regulation_length();
        if t > end {
            return Err(Error::OutOfRange {
                what: "t",
                value: t as i64,
                lo: 0,
                hi: end as i64,
            });
        }
        let upto = self.events.partition_point(|e| e.t <= t);
        Ok(self.events[..upto].iter().map(ScoringEvent::delta).sum())
    }

    pub fn final_lead(&self) -> i64 {
        self.events.iter().map(ScoringEvent::delta).sum()
    }

    pub fn trajectory(&self) -> LeadTrajectory {
        let mut lead = 0;
        let mut points = Vec::with_capacity(self.events.len() + 1);
        points.push((0, 0));
        for e in &self.events {
            lead += e.delta();
            if e.t == 0 {
                points[0].1 = lead;
            } else {
                points.push((e.t, lead));
            }
        }
        LeadTrajectory { points }
    }

    /// The same game with team labels swapped.
    pub fn mirrored(&self) -> GameLog {
        let events = self
            .events
            .iter()
            .map(|e| ScoringEvent::new(e.t, e.team.other(), e.points))
            .collect();
        GameLog::new(self.game_id.to_owned(), self.sport.clone(), events)
    }
}

/// Lead sampled right after each change, starting from `(0, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadTrajectory {
    pub points: Vec<(u32, i64)>,
}

impl LeadTrajectory {
    /// Right-continuous step-function evaluation.
    pub fn at(&self, t: u32) -> i64 {
        let i = self.points.partition_point(|&(s, _)| s <= t);
        self.points[i.saturating_sub(1)].1
    }
}

/// Checks every game in `games` belongs to `sport`.
pub(crate) fn ensure_sport(games: &[GameLog], sport: &SportConfig) -> Result<()> {
    match games.iter().find(|g| &g.sport != sport.sport()) {
        Some(g) => Err(Error::SportMismatch {
            game_id: g.game_id.clone(),
            expected: sport.sport().to_string(),
            found: g.sport.to_string(),
        }),
        None => Ok(()),
    }
}
