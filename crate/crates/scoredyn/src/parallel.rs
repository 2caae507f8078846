//! Multi-threaded drivers. Results equal the serial core routines
//! bit-for-bit: every game and split draws from its own substream and
//! partial results are merged in index order.

use std::sync::OnceLock;

use anyhow::{Context, Result};
use rayon::prelude::*;
use scoredyn_core::predict::{evaluate_split, merge_splits, EvalConfig, Predictability};
use scoredyn_core::simulate::{LeadSpread, ModelSpec, Simulator, SpreadAccumulator, MIN_CURVE_GAMES};
use scoredyn_core::{GameLog, SportConfig};

/// Overrides the worker count.
pub const THREADS_ENV: &str = "SCOREDYN_THREADS";

static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("{THREADS_ENV}={v:?} is not a count"))?;
            anyhow::ensure!(n > 0, "{THREADS_ENV} must be positive");
            Ok(n)
        }
        Err(_) => Ok(0),
    }
}

/// Runs `f` on the shared pool.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    if POOL.get().is_none() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads_from_env()?).build()?;
        let _ = POOL.set(pool);
    }
    Ok(POOL.get().expect("initialized above").install(f))
}

pub fn simulate_corpus(spec: &ModelSpec, n_games: usize) -> Result<Vec<GameLog>> {
    let sim = Simulator::new(spec);
    install(|| (0..n_games as u64).into_par_iter().map(|i| sim.game(i)).collect())
}

pub fn lead_variance_curve(spec: &ModelSpec, n_games: usize, sample_every: u32) -> Result<Vec<LeadSpread>> {
    anyhow::ensure!(n_games >= MIN_CURVE_GAMES, "need at least {MIN_CURVE_GAMES} simulated games for a curve");
    let t = spec.sport.regulation_length();
    let empty = SpreadAccumulator::new(t, sample_every)?;
    let sim = Simulator::new(spec);
    let acc = install(|| {
        (0..n_games as u64)
            .into_par_iter()
            .fold(
                || empty.clone(),
                |mut acc, i| {
                    acc.add_game(&sim.game(i));
                    acc
                },
            )
            .reduce(
                || empty.clone(),
                |mut a, b| {
                    a.merge(&b);
                    a
                },
            )
    })?;
    Ok(acc.finish())
}

pub fn evaluate_predictability(games: &[GameLog], sport: &SportConfig, cfg: &EvalConfig) -> Result<Predictability> {
    anyhow::ensure!(cfg.splits > 0, "at least one split required");
    let splits = install(|| {
        (0..cfg.splits)
            .into_par_iter()
            .map(|s| evaluate_split(games, sport, cfg, s))
            .collect::<Result<Vec<_>, _>>()
    })??;
    Ok(merge_splits(&splits, cfg)?)
}
