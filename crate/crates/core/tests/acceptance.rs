//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use common::*;
use scoredyn_core::estimate::*;
use scoredyn_core::predict::*;
use scoredyn_core::simulate::*;
use scoredyn_core::synth::*;
use scoredyn_core::*;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn poisson_identity() -> Outcome {
    let mut worst = 0.0f64;
    for sport in SportId::BUILTIN {
        let cfg = builtin(sport.clone());
        let league = LeagueSpec::random_league(&cfg, 6, 300, 0.7, 11).map_err(|e| e.to_string())?;
        let games = generate_league(&league).map_err(|e| e.to_string())?;
        let rate = fit_poisson_rate(&games, &cfg).map_err(|e| e.to_string())?;
        let mean = games.iter().map(|g| g.events.len()).sum::<usize>() as f64 / games.len() as f64;
        worst = worst.max((rate.lambda_hat * cfg.regulation_length() as f64 - mean).abs() / mean);
    }

    // 2,654 games with 19,476 events: 898 games of 8 events, the rest of 7.
    let nfl = builtin(SportId::Nfl);
    let stub: Vec<GameLog> = (0..2654)
        .map(|i| {
            let n = if i < 898 { 8 } else { 7 };
            let events = (0..n).map(|k| ScoringEvent::new(100 + 400 * k, Team::R, 7)).collect();
            GameLog::new(format!("s{i}"), SportId::Nfl, events)
        })
        .collect();
    let rate = fit_poisson_rate(&stub, &nfl).map_err(|e| e.to_string())?;
    let counts = poisson_rate_from_counts(2654, 19476, 3600).map_err(|e| e.to_string())?;
    let ok = worst <= 1e-12
        && rate.events == 19476
        && (rate.lambda_hat - 0.00204).abs() <= 0.00001
        && (rate.events_per_game() - 7.34).abs() <= 0.01
        && counts.lambda_hat == rate.lambda_hat;
    check(
        ok,
        format!(
            "max rel err {worst:.1e}; stub lambda {:.6} lambdaT {:.4}",
            rate.lambda_hat,
            rate.events_per_game()
        ),
    )
}

fn balance_null_oracle() -> Outcome {
    let games: Vec<GameLog> = (0..50)
        .map(|i| game(&format!("g{i}"), SportId::Nba, &[(10, Team::R, 2), (20, Team::B, 2)]))
        .collect();
    let n = 100_000u64;
    let null = balance_null_distribution(&games, n as usize, 2024).map_err(|e| e.to_string())?;
    let mut ok = null.samples.len() as u64 == n;
    let mut detail = Vec::new();
    for (c, p) in [(0.0, 0.25), (0.5, 0.5), (1.0, 0.25)] {
        let hits = null.samples.iter().filter(|&&x| x == c).count() as u64;
        ok &= within_binomial(hits, n, p, 3.0);
        detail.push(format!("{c}:{:.4}", hits as f64 / n as f64));
    }
    let stray = null.samples.iter().filter(|&&x| x != 0.0 && x != 0.5 && x != 1.0).count();
    check(ok && stray == 0, format!("atoms {}", detail.join(" ")))
}

fn correlation_sanity() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let p: f64 = 0.00204;
    // Inverse-transform geometric on {1, 2, ...}.
    let gaps: Vec<f64> = (0..1_000_000)
        .map(|_| {
            let u: f64 = rng.random();
            ((1.0 - u).ln() / (1.0 - p).ln()).ceil().max(1.0)
        })
        .collect();
    let c = correlation_from_gaps(&[gaps], 50).map_err(|e| e.to_string())?;
    let worst = (1..=50)
        .map(|n| c.at(n).map(f64::abs).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    let alternating: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 5.0 } else { 300.0 }).collect();
    let c1 = correlation_from_gaps(&[alternating], 1)
        .map_err(|e| e.to_string())?
        .at(1)
        .unwrap_or(f64::NAN);
    check(
        worst < 0.01 && c1 < -0.95,
        format!("max |C(n)| n<=50 {worst:.4}; alternating C(1) {c1:.4}"),
    )
}

/// Outcome probabilities of a fair unit walk by listing all `2^n` paths.
fn enumerate_paths(lead: i64, n: u32) -> (f64, f64, f64) {
    let mut out = (0.0, 0.0, 0.0);
    let w = 0.5f64.powi(n as i32);
    for mask in 0u32..(1 << n) {
        let ups = mask.count_ones() as i64;
        let end = lead + ups - (n as i64 - ups);
        match end.signum() {
            1 => out.0 += w,
            0 => out.1 += w,
            _ => out.2 += w,
        }
    }
    out
}

fn chain_vs_simulator() -> Outcome {
    let fair = build_chain(&LeadFunction::constant(12, 0.5).unwrap(), &Pmf::point_mass(1).unwrap(), 12)
        .map_err(|e| e.to_string())?;
    let mut exact_err = 0.0f64;
    for n in 0..=6u32 {
        for lead in -5..=5i64 {
            let f = fair.forecast_steps(lead, n as usize).map_err(|e| e.to_string())?;
            let (r, t, b) = enumerate_paths(lead, n);
            exact_err = exact_err
                .max((f.p_win_r - r).abs())
                .max((f.p_tie - t).abs())
                .max((f.p_win_b - b).abs());
        }
    }

    // Restoring-force shape taken from a fitted NBA-like league.
    let nba = builtin(SportId::Nba);
    let league = LeagueSpec::two_team(&nba, 1.0, 4000, 0.03194, 5);
    let games = generate_restoring_league(&league, -0.002).map_err(|e| e.to_string())?;
    let slope = lead_scoring_function(&games, 100, DEFAULT_MIN_STATE_COUNT)
        .map_err(|e| e.to_string())?
        .fit
        .ok_or("no fit")?
        .slope;
    let lmax = 400u32;
    let phi = |l: i64| (0.5 + slope * l as f64).clamp(0.02, 0.98);
    let chain = build_chain(&LeadFunction::from_fn(lmax, phi).unwrap(), nba.point_values(), lmax)
        .map_err(|e| e.to_string())?;
    let runs = 100_000u64;
    let mut misses = Vec::new();
    for (start, n) in [(0i64, 20u32), (4, 30), (-2, 10)] {
        let f = chain.forecast_steps(start, n as usize).map_err(|e| e.to_string())?;
        // Starting at `start` is starting at 0 with phi shifted by `start`.
        let shifted = LeadFunction::from_fn(lmax, |l| phi(l + start)).unwrap();
        let sport = bench_sport(n, nba.point_values().clone(), lmax);
        let spec = lead_walk(&sport, shifted, (99 + start) as u64);
        let sim = Simulator::new(&spec);
        let mut tally = [0u64; 3];
        for i in 0..runs {
            let g = sim.game(i);
            match (g.final_lead() + start).signum() {
                1 => tally[0] += 1,
                0 => tally[1] += 1,
                _ => tally[2] += 1,
            }
        }
        for (hits, p) in tally.iter().zip([f.p_win_r, f.p_tie, f.p_win_b]) {
            if !within_binomial(*hits, runs, p, 3.0) {
                misses.push(format!("start {start} n {n}: {hits}/{runs} vs {p:.5}"));
            }
        }
    }
    check(
        exact_err <= 1e-12 && misses.is_empty(),
        format!("enumeration max err {exact_err:.1e}; fitted slope {slope:.5}; MC misses {misses:?}"),
    )
}

fn parameter_recovery() -> Outcome {
    let nfl = builtin(SportId::Nfl);
    let spec = LeagueSpec::two_team(&nfl, 9.0, 10_000, 0.002, 17);
    let games = generate_league(&spec).map_err(|e| e.to_string())?;
    let rate = fit_poisson_rate(&games, &nfl).map_err(|e| e.to_string())?;
    let (mut r, mut all) = (0u64, 0u64);
    for g in &games {
        r += g.events.iter().filter(|e| e.team == Team::R).count() as u64;
        all += g.events.len() as u64;
    }
    let fit = lead_scoring_function(&games, nfl.lead_truncation(), DEFAULT_MIN_STATE_COUNT)
        .map_err(|e| e.to_string())?
        .fit
        .ok_or("no fit for skill league")?;

    let nba = builtin(SportId::Nba);
    let base = LeagueSpec::two_team(&nba, 1.0, 10_000, 0.03194, 23);
    let restoring = generate_restoring_league(&base, -0.002).map_err(|e| e.to_string())?;
    let control = generate_restoring_league(&base, 0.0).map_err(|e| e.to_string())?;
    let rfit = lead_scoring_function(&restoring, nba.lead_truncation(), DEFAULT_MIN_STATE_COUNT)
        .map_err(|e| e.to_string())?
        .fit
        .ok_or("no fit for restoring league")?;
    let final_var =
        |gs: &[GameLog]| scoredyn_core::stats::variance(&gs.iter().map(|g| g.final_lead() as f64).collect::<Vec<_>>());
    let (v_restoring, v_control) = (final_var(&restoring), final_var(&control));

    let lambda_ok = (rate.lambda_hat / 0.002 - 1.0).abs() < 0.01;
    let win_ok = within_binomial(r, all, 0.9, 3.0);
    let slope_ok = fit.slope - 3.0 * fit.slope_std_err > 0.0;
    let restoring_ok = rfit.slope + 3.0 * rfit.slope_std_err < 0.0 && v_restoring < v_control;
    check(
        lambda_ok && win_ok && slope_ok && restoring_ok,
        format!(
            "lambda {:.6}; pooled win {:.4}; slope {:.5}±{:.5}; restoring slope {:.5}±{:.5}; final var {:.1} vs {:.1}",
            rate.lambda_hat,
            r as f64 / all as f64,
            fit.slope,
            fit.slope_std_err,
            rfit.slope,
            rfit.slope_std_err,
            v_restoring,
            v_control
        ),
    )
}

fn predictability_dominance() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for sport in SportId::BUILTIN {
        let cfg = builtin(sport.clone());
        let league = LeagueSpec::desk_scale(&cfg, 1).map_err(|e| e.to_string())?;
        let games = generate_league(&league).map_err(|e| e.to_string())?;
        let eval = EvalConfig {
            splits: 20,
            ..EvalConfig::default()
        };
        let p = evaluate_predictability(&games, &cfg, &eval).map_err(|e| e.to_string())?;
        let below: Vec<usize> = p
            .rows
            .iter()
            .filter(|r| r.auc_chain < r.auc_leader)
            .map(|r| r.event_index)
            .collect();
        let fin = p.final_event.auc_chain;
        ok &= below.is_empty() && fin >= 0.95;
        parts.push(format!(
            "{sport}: {} indices, chain below leader at {below:?}, final-event AUC {fin:.4}",
            p.rows.len()
        ));
    }
    check(ok, parts.join("; "))
}

fn run_property(name: &str, cases: u32, failures: &mut Vec<String>, f: impl FnOnce(&mut TestRunner) -> Result<(), String>) {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    if let Err(e) = f(&mut runner) {
        failures.push(format!("{name}: {e}"));
    }
}

fn invariant_suite() -> Outcome {
    let mut failures = Vec::new();
    run_property("row-stochastic", 200, &mut failures, |r| {
        r.run(&(arb_phi(12), arb_pmf(6)), |(phi, pmf)| {
            let c = build_chain(&phi, &pmf, 12).unwrap();
            for l in c.states() {
                let row = c.row(l);
                prop_assert!(row.iter().all(|&p| p >= 0.0));
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    });
    run_property("forecast normalization", 40, &mut failures, |r| {
        r.run(&(arb_phi(10), arb_pmf(4)), |(phi, pmf)| {
            let c = build_chain(&phi, &pmf, 10).unwrap();
            let table = c.outcome_table(200);
            for n in 0..=200 {
                for l in c.states() {
                    prop_assert!((table.get(l, n).unwrap().total() - 1.0).abs() <= 1e-9);
                }
            }
            for n in [0, 1, 7, 200] {
                prop_assert!((c.forecast_steps(3, n).unwrap().total() - 1.0).abs() <= 1e-9);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    });
    run_property("phi antisymmetry", 200, &mut failures, |r| {
        r.run(&arb_games(builtin(SportId::Nfl), 8, 12), |games| {
            prop_assume!(games.iter().any(|g| !g.events.is_empty()));
            let s = lead_scoring_function(&games, 30, 1).unwrap();
            prop_assert!(s.phi.at(0) == 0.5);
            for l in 1..=30 {
                prop_assert!(s.phi.at(l) + s.phi.at(-l) == 1.0);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    });
    run_property("mirror symmetry", 100, &mut failures, |r| {
        r.run(&(arb_antisymmetric_phi(15), arb_pmf(5), 0usize..60), |(phi, pmf, n)| {
            let c = build_chain(&phi, &pmf, 15).unwrap();
            let table = c.outcome_table(n);
            for l in 0..=15 {
                prop_assert_eq!(c.forecast_steps(l, n).unwrap(), c.forecast_steps(-l, n).unwrap().swapped());
                prop_assert_eq!(table.get(l, n).unwrap(), table.get(-l, n).unwrap().swapped());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    });
    run_property("seeded reproducibility", 16, &mut failures, |r| {
        r.run(&(any::<u64>(), 0.1f64..2.0), |(seed, sigma)| {
            let nba = builtin(SportId::Nba);
            let spec = ModelSpec::ideal(&nba, 0.03, seed).unwrap();
            prop_assert_eq!(simulate_corpus(&spec, 20), simulate_corpus(&spec, 20));
            let league = LeagueSpec::random_league(&nba, 5, 20, sigma, seed).unwrap();
            prop_assert_eq!(generate_league(&league).unwrap(), generate_league(&league).unwrap());
            prop_assert_eq!(
                generate_restoring_league(&league, -0.001).unwrap(),
                generate_restoring_league(&league, -0.001).unwrap()
            );
            let other = ModelSpec::ideal(&nba, 0.03, seed ^ 1).unwrap();
            prop_assert_ne!(simulate_corpus(&spec, 20), simulate_corpus(&other, 20));
            Ok(())
        })
        .map_err(|e| e.to_string())
    });
    check(failures.is_empty(), if failures.is_empty() { "5 properties green".into() } else { failures.join("; ") })
}

fn point_value_fidelity() -> Outcome {
    let table: [(SportId, &[(u32, f64)]); 4] = [
        (SportId::Nfl, &[(2, 0.0083), (3, 0.3055), (6, 0.0308), (7, 0.6222), (8, 0.0332)]),
        (SportId::Cfb, &[(2, 0.0113), (3, 0.1702), (6, 0.0708), (7, 0.7058), (8, 0.0419)]),
        (SportId::Nhl, &[(1, 1.0)]),
        (
            SportId::Nba,
            &[(1, 0.0941), (2, 0.7373), (3, 0.1647), (4, 0.0029), (5, 0.0009), (6, 0.0001)],
        ),
    ];
    let mut misses = Vec::new();
    for (i, (sport, expected)) in table.iter().enumerate() {
        let cfg = builtin(sport.clone());
        let pmf = cfg.point_values();
        if pmf.support().len() != expected.len() || expected.iter().any(|&(k, p)| pmf.prob(k) != p) {
            misses.push(format!("{sport} built-in pmf differs"));
        }
        let lambda = scoredyn_core::types::reference_rate(sport).unwrap();
        let spec = ModelSpec::ideal(&cfg, lambda, 300 + i as u64).map_err(|e| e.to_string())?;
        let games = simulate_corpus(&spec, 200_000 / (1 + (lambda * 3600.0) as usize));
        let n: u64 = games.iter().map(|g| g.events.len() as u64).sum();
        let fitted = point_value_distribution(&games).map_err(|e| e.to_string())?;
        for &(k, p) in *expected {
            let hits = (fitted.prob(k) * n as f64).round() as u64;
            if !within_binomial(hits, n, p, 3.0) {
                misses.push(format!("{sport} Pr({k}) {:.4} vs {p} over {n} events", fitted.prob(k)));
            }
        }
        if fitted.support().iter().any(|k| pmf.prob(*k) == 0.0) {
            misses.push(format!("{sport} recovered a value outside the table"));
        }
    }
    check(misses.is_empty(), if misses.is_empty() { "all four sports".into() } else { misses.join("; ") })
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("poisson identity", Duration::from_secs(1), poisson_identity),
        ("balance null oracle", Duration::from_secs(5), balance_null_oracle),
        ("correlation sanity", Duration::from_secs(10), correlation_sanity),
        ("chain vs simulator", Duration::from_secs(30), chain_vs_simulator),
        ("parameter recovery", Duration::from_secs(60), parameter_recovery),
        ("predictability dominance", Duration::from_secs(120), predictability_dominance),
        ("invariant suite", Duration::from_secs(30), invariant_suite),
        ("point-value fidelity", Duration::MAX, point_value_fidelity),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {} ({:.2}s) {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
