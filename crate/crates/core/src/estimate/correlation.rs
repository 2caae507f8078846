use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::tempo::game_gaps;
use crate::error::{Error, Result};
use crate::types::GameLog;

/// Two-point correlation of inter-arrival times at lags `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    /// `values[n - 1]` is `C(n)`; `None` when no game had `n + 1` gaps.
    pub values: Vec<Option<f64>>,
    /// Usable lag pairs pooled at each lag.
    pub pairs: Vec<u64>,
}

impl Correlation {
    pub fn at(&self, lag: usize) -> Option<f64> {
        self.values.get(lag.checked_sub(1)?).copied().flatten()
    }
}

/// Pools per-sequence correlations, weighting each by its usable pair
/// count `m - n`. A sequence enters lag `n` only with at least `n + 1` gaps
/// and nonzero variance.
pub fn correlation_from_gaps<S: AsRef<[f64]>>(sequences: &[S], n_max: usize) -> Result<Correlation> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let mut weighted = vec![0.0; n_max];
    let mut pairs = vec![0u64; n_max];
    for seq in sequences {
        let gaps = seq.as_ref();
        let m = gaps.len();
        if m < 2 {
            continue;
        }
        let mean = gaps.iter().sum::<f64>() / m as f64;
        let dev: Vec<f64> = gaps.iter().map(|t| t - mean).collect();
        let denom: f64 = dev.iter().map(|d| d * d).sum();
        if denom <= 0.0 {
            continue;
        }
        for n in 1..=n_max.min(m - 1) {
            let num: f64 = dev.iter().zip(&dev[n..]).map(|(a, b)| a * b).sum();
            let usable = (m - n) as u64;
            weighted[n - 1] += usable as f64 * (num / denom);
            pairs[n - 1] += usable;
        }
    }
    if pairs[0] == 0 {
        return Err(Error::NoUsableGames);
    }
    let values = weighted
        .iter()
        .zip(&pairs)
        .map(|(&w, &p)| (p > 0).then(|| (w / p as f64).clamp(-1.0, 1.0)))
        .collect();
    Ok(Correlation { values, pairs })
}

pub fn correlation_function(games: &[GameLog], n_max: usize) -> Result<Correlation> {
    let sequences: Vec<Vec<f64>> = games
        .iter()
        .map(|g| game_gaps(g).map(f64::from).collect())
        .collect();
    correlation_from_gaps(&sequences, n_max)
}
