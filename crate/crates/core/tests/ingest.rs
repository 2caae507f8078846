mod common;

use common::*;
use proptest::prelude::*;
use scoredyn_core::ingest::*;
use scoredyn_core::simulate::{simulate_corpus, ModelSpec};
use scoredyn_core::{GameLog, ScoringEvent, SportId, Team};

fn rec(line: usize, sport: &str, game: &str, team: &str, t: i64, points: i64) -> RawEventRecord {
    RawEventRecord {
        line,
        sport: sport.into(),
        game_id: game.into(),
        team: team.into(),
        t,
        points,
    }
}

fn assemble(records: Vec<RawEventRecord>) -> Result<Vec<GameLog>, scoredyn_core::IngestError> {
    assemble_games(records, &SportRegistry::builtin())
}

#[test]
fn single_record_becomes_one_event() {
    let games = assemble(vec![rec(2, "nfl", "g1", "r", 10, 7)]).unwrap();
    assert_eq!(games, vec![game("g1", SportId::Nfl, &[(10, Team::R, 7)])]);
}

#[test]
fn overtime_records_leave_an_empty_game() {
    let games = assemble(vec![rec(2, "nfl", "g1", "r", 3610, 7)]).unwrap();
    assert_eq!(games.len(), 1);
    assert!(games[0].events.is_empty());
    // The final regulation second still counts.
    let games = assemble(vec![rec(2, "nfl", "g1", "b", 3600, 3)]).unwrap();
    assert_eq!(games[0].events, vec![ScoringEvent::new(3600, Team::B, 3)]);
}

#[test]
fn same_second_records_merge() {
    let games = assemble(vec![rec(2, "nfl", "g1", "r", 10, 2), rec(3, "nfl", "g1", "r", 10, 1)]).unwrap();
    assert_eq!(games[0].events, vec![ScoringEvent::new(10, Team::R, 3)]);

    let games = assemble(vec![
        rec(2, "nba", "g1", "r", 10, 2),
        rec(3, "nba", "g1", "b", 10, 3),
        rec(4, "nba", "g1", "r", 11, 2),
        rec(5, "nba", "g1", "b", 11, 2),
    ])
    .unwrap();
    assert_eq!(games[0].events, vec![ScoringEvent::new(10, Team::B, 1)]);
}

#[test]
fn home_and_away_map_to_r_and_b() {
    let games = assemble(vec![
        rec(2, "nhl", "g1", "home", 100, 1),
        rec(3, "nhl", "g1", "AWAY", 200, 1),
        rec(4, "nhl", "g2", "away", 50, 1),
    ])
    .unwrap();
    assert_eq!(games[0].events.iter().map(|e| e.team).collect::<Vec<_>>(), vec![Team::R, Team::B]);
    assert_eq!(games[1].game_id, "g2");
    assert_eq!(games[1].events[0].team, Team::B);
}

#[test]
fn zero_point_records_declare_empty_games() {
    let games = assemble(vec![rec(2, "nhl", "quiet", "r", 0, 0), rec(3, "nhl", "g", "b", 5, 1), rec(4, "nhl", "g", "r", 9, 0)]).unwrap();
    assert_eq!(games.len(), 2);
    assert!(games[0].events.is_empty());
    assert_eq!(games[1].events, vec![ScoringEvent::new(5, Team::B, 1)]);
    let records = to_records(&games);
    assert_eq!((records[0].t, records[0].points, records[0].line), (0, 0, 2));
    assert_eq!(assemble(records).unwrap(), games);
}

#[test]
fn unsorted_records_are_ordered_by_time() {
    let games = assemble(vec![rec(2, "nhl", "g", "r", 900, 1), rec(3, "nhl", "g", "b", 30, 1)]).unwrap();
    assert_eq!(games[0].events.iter().map(|e| e.t).collect::<Vec<_>>(), vec![30, 900]);
}

#[test]
fn errors_cite_line_and_field() {
    let cases = [
        (rec(7, "curling", "g", "r", 1, 1), "sport"),
        (rec(7, "nfl", "", "r", 1, 1), "game_id"),
        (rec(7, "nfl", "g", "visitor", 1, 1), "team"),
        (rec(7, "nfl", "g", "r", -1, 1), "t"),
        (rec(7, "nfl", "g", "r", 1, -3), "points"),
    ];
    for (r, field) in cases {
        let err = assemble(vec![rec(6, "nfl", "h", "r", 5, 3), r]).unwrap_err();
        assert_eq!((err.line, err.field), (7, field), "{err}");
        assert!(err.to_string().starts_with("line 7: field `"));
    }
    let err = assemble(vec![rec(2, "nfl", "g", "r", 5, 3), rec(3, "nba", "g", "r", 6, 2)]).unwrap_err();
    assert_eq!((err.line, err.field), (3, "sport"));
}

#[test]
fn custom_sports_need_registration() {
    let sport = bench_sport(100, scoredyn_core::Pmf::point_mass(1).unwrap(), 5);
    assert!(assemble(vec![rec(2, "bench", "g", "r", 5, 1)]).is_err());
    let mut registry = SportRegistry::builtin();
    registry.register(sport);
    let games = assemble_games(vec![rec(2, "bench", "g", "r", 5, 1)], &registry).unwrap();
    assert_eq!(games[0].sport, SportId::Custom("bench".into()));
}

#[test]
fn corpus_summary_counts() {
    // 898 games with 8 events and 1756 with 7.
    let nfl = builtin(SportId::Nfl);
    let games: Vec<GameLog> = (0..2654u32)
        .map(|i| {
            let n = if i < 898 { 8 } else { 7 };
            let events = (1..=n).map(|k| ScoringEvent::new(k * 400, Team::R, 7)).collect();
            GameLog::new(format!("g{i}"), nfl.sport().clone(), events)
        })
        .collect();
    let report = validate_corpus(&games, &SportRegistry::builtin());
    assert_eq!((report.games, report.events), (2654, 19_476));
    assert!((report.mean_events_per_game - 7.34).abs() < 0.005);
    assert_eq!(report.per_sport.len(), 1);
    assert!(report.failures.is_empty());

    let empty = validate_corpus(&[], &SportRegistry::builtin());
    assert_eq!((empty.games, empty.events, empty.mean_events_per_game), (0, 0, 0.0));
}

#[test]
fn summary_of_synthetic_corpus() {
    let nfl = builtin(SportId::Nfl);
    let n = 1000;
    let games = simulate_corpus(&ModelSpec::ideal(&nfl, 0.002, 31).unwrap(), n);
    let report = validate_corpus(&games, &SportRegistry::builtin());
    let se = (7.2f64 / n as f64).sqrt();
    assert!((report.mean_events_per_game - 7.2).abs() <= 3.0 * se, "{}", report.mean_events_per_game);
    assert!(report.failures.is_empty());
}

#[test]
fn lead_examples() {
    let nfl = builtin(SportId::Nfl);
    let empty = game("e", SportId::Nfl, &[]);
    assert_eq!(empty.lead_at(&nfl, 0).unwrap(), 0);
    assert_eq!(empty.lead_at(&nfl, 3600).unwrap(), 0);
    let g = game("g", SportId::Nfl, &[(10, Team::R, 7), (500, Team::B, 3)]);
    assert_eq!(g.lead_at(&nfl, 9).unwrap(), 0);
    assert_eq!(g.lead_at(&nfl, 10).unwrap(), 7);
    assert_eq!(g.lead_at(&nfl, 100).unwrap(), 7);
    assert_eq!(g.lead_at(&nfl, 3600).unwrap(), 4);
    assert!(g.lead_at(&nfl, 3601).is_err());
}

fn records_strategy() -> impl Strategy<Value = Vec<RawEventRecord>> {
    let sport = prop_oneof![Just("nfl"), Just("nhl"), Just("nba")];
    (sport, prop::collection::vec((0usize..4, prop_oneof![Just("r"), Just("b")], 0i64..3700, 1i64..8), 0..40))
        .prop_map(|(sport, rows)| {
            rows.into_iter()
                .enumerate()
                .map(|(i, (g, team, t, p))| rec(i + 2, sport, &format!("{sport}{g}"), team, t, p))
                .collect()
        })
}

proptest! {
    #[test]
    fn assembled_events_never_exceed_records(records in records_strategy()) {
        let games = assemble(records.clone()).unwrap();
        let events: usize = games.iter().map(|g| g.events.len()).sum();
        prop_assert!(events <= records.len());
        let registry = SportRegistry::builtin();
        for g in &games {
            prop_assert!(g.check(registry.get(&g.sport).unwrap()).is_ok());
        }
        let mut seconds: Vec<(&str, i64)> = records.iter().map(|r| (r.game_id.as_str(), r.t)).collect();
        seconds.sort();
        seconds.dedup();
        let overtime = records.iter().any(|r| r.t > registry.get(&r.sport.parse().unwrap()).unwrap().regulation_length() as i64);
        if seconds.len() == records.len() && !overtime {
            prop_assert_eq!(events, records.len());
        }
    }

    #[test]
    fn canonical_records_round_trip(games in arb_games(builtin(SportId::Nba), 6, 12)) {
        let records = to_records(&games);
        prop_assert!(records.len() >= games.len());
        prop_assert_eq!(assemble(records).unwrap(), games);
    }

    #[test]
    fn lead_is_a_right_continuous_step_function(games in arb_games(builtin(SportId::Nfl), 1, 12), t in 0u32..=3600) {
        let nfl = builtin(SportId::Nfl);
        let g = &games[0];
        let lead = g.lead_at(&nfl, t).unwrap();
        prop_assert_eq!(lead, g.trajectory().at(t));
        if !g.events.iter().any(|e| e.t == t) && t > 0 {
            prop_assert_eq!(lead, g.lead_at(&nfl, t - 1).unwrap());
        }
        prop_assert_eq!(g.mirrored().lead_at(&nfl, t).unwrap(), -lead);
        prop_assert_eq!(g.lead_at(&nfl, 3600).unwrap(), g.final_lead());
    }
}
