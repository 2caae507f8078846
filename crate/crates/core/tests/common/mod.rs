#![allow(dead_code)]

use proptest::prelude::*;
use scoredyn_core::estimate::{BalanceModel, LeadFunction, TempoModel};
use scoredyn_core::simulate::{BalanceKind, ModelSpec, TempoKind};
use scoredyn_core::{GameLog, Pmf, ScoringEvent, SportConfig, SportId, Team};

pub fn builtin(sport: SportId) -> SportConfig {
    SportConfig::builtin(&sport).unwrap()
}

/// Single-period sport used to pin event counts and truncation.
pub fn bench_sport(t: u32, points: Pmf, lmax: u32) -> SportConfig {
    SportConfig::new(SportId::Custom("bench".into()), t, vec![t], points, lmax).unwrap()
}

/// Exactly one event in each of the seconds `1..=T`.
pub fn every_second(t: u32) -> TempoModel {
    let mut profile = vec![1.0; t as usize + 1];
    profile[0] = 0.0;
    TempoModel {
        lambda_hat: 1.0,
        lambda_std_err: 0.0,
        regulation_length: t,
        profile,
        interarrival: Pmf::point_mass(1).unwrap(),
    }
}

/// Markov-balance spec with a fixed number of events per game.
pub fn lead_walk(sport: &SportConfig, phi: LeadFunction, seed: u64) -> ModelSpec {
    let balance = BalanceModel {
        c_hat_samples: vec![0.5],
        phi,
        phi_fit: None,
        point_values: sport.point_values().clone(),
    };
    ModelSpec::new(
        TempoKind::Bernoulli,
        BalanceKind::Markov,
        every_second(sport.regulation_length()),
        balance,
        sport.clone(),
        seed,
    )
    .unwrap()
}

/// `|observed - expected| <= k * sd` for a binomial proportion.
pub fn within_binomial(successes: u64, trials: u64, p: f64, k: f64) -> bool {
    let n = trials as f64;
    let sd = (n * p * (1.0 - p)).sqrt();
    (successes as f64 - n * p).abs() <= k * sd
}

pub fn game(id: &str, sport: SportId, events: &[(u32, Team, u32)]) -> GameLog {
    GameLog::new(
        id,
        sport,
        events.iter().map(|&(t, team, p)| ScoringEvent::new(t, team, p)).collect(),
    )
}

pub fn arb_team() -> impl Strategy<Value = Team> {
    prop_oneof![Just(Team::R), Just(Team::B)]
}

pub fn arb_pmf(max_value: u32) -> impl Strategy<Value = Pmf> {
    prop::collection::btree_map(1..=max_value, 1u32..1000, 1..=max_value as usize).prop_map(|w| {
        let total: u32 = w.values().sum();
        let mut entries: Vec<(u32, f64)> = w.iter().map(|(&k, &c)| (k, c as f64 / total as f64)).collect();
        // Put the rounding residue on the last value so the sum is exact enough.
        let head: f64 = entries[..entries.len() - 1].iter().map(|e| e.1).sum();
        entries.last_mut().unwrap().1 = 1.0 - head;
        Pmf::new(entries).unwrap()
    })
}

pub fn arb_phi(lmax: u32) -> impl Strategy<Value = LeadFunction> {
    prop::collection::vec(0.0f64..=1.0, 2 * lmax as usize + 1)
        .prop_map(move |v| LeadFunction::new(lmax, v, vec![0; 2 * lmax as usize + 1]).unwrap())
}

pub fn arb_antisymmetric_phi(lmax: u32) -> impl Strategy<Value = LeadFunction> {
    prop::collection::vec(0.0f64..=1.0, lmax as usize + 1)
        .prop_map(|v| LeadFunction::antisymmetric(&v, &[]).unwrap())
}

/// Games for `sport` with up to `max_events` events at distinct seconds.
pub fn arb_games(sport: SportConfig, max_games: usize, max_events: usize) -> impl Strategy<Value = Vec<GameLog>> {
    let t = sport.regulation_length();
    let values: Vec<u32> = sport.point_values().support().to_vec();
    let id = sport.sport().clone();
    let event = (1..=t, arb_team(), proptest::sample::select(values));
    prop::collection::vec(prop::collection::vec(event, 0..=max_events), 1..=max_games)
        .prop_map(move |games| {
            games
                .into_iter()
                .enumerate()
                .map(|(i, mut evs)| {
                    evs.sort_by_key(|e| e.0);
                    evs.dedup_by_key(|e| e.0);
                    GameLog::new(
                        format!("g{i}"),
                        id.clone(),
                        evs.into_iter().map(|(t, team, p)| ScoringEvent::new(t, team, p)).collect(),
                    )
                })
                .collect()
        })
}
