//! Discrete distributions over positive integers (point values, gap lengths).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SUM_TOLERANCE: f64 = 1e-9;

/// A probability mass function over positive integers.
///
/// Serializes as a JSON object keyed by value, e.g. `{"1": 0.25, "2": 0.75}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<u32, f64>", into = "BTreeMap<u32, f64>")]
pub struct Pmf {
    values: Vec<u32>,
    probs: Vec<f64>,
}

impl Pmf {
    /// Builds a pmf, rejecting zero values, negative or non-finite masses and
    /// totals further than [`SUM_TOLERANCE`] from one. Zero-mass entries are
    /// dropped.
    pub fn new(entries: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut entries: Vec<(u32, f64)> = entries.into_iter().collect();
        for &(v, p) in &entries {
            if v == 0 {
                return Err(Error::InvalidPmf("values must be >= 1".into()));
            }
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidPmf(format!("bad mass {p} at value {v}")));
            }
        }
        entries.sort_by_key(|e| e.0);
        let mut values = Vec::with_capacity(entries.len());
        let mut probs: Vec<f64> = Vec::with_capacity(entries.len());
        for (v, p) in entries {
            if values.last() == Some(&v) {
                *probs.last_mut().expect("paired with values") += p;
            } else {
                values.push(v);
                probs.push(p);
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidPmf(format!("masses sum to {total}")));
        }
        let (values, probs) = values.into_iter().zip(probs).filter(|&(_, p)| p > 0.0).unzip();
        Ok(Self { values, probs })
    }

    /// Relative frequencies of `counts` (value -> count).
    pub fn from_counts(counts: &BTreeMap<u32, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::InvalidPmf("no observations".into()));
        }
        let values: Vec<u32> = counts.iter().filter(|(_, &c)| c > 0).map(|(&v, _)| v).collect();
        if values.first() == Some(&0) {
            return Err(Error::InvalidPmf("values must be >= 1".into()));
        }
        let probs = counts
            .values()
            .filter(|&&c| c > 0)
            .map(|&c| c as f64 / total as f64)
            .collect();
        Ok(Self { values, probs })
    }

    /// All mass on a single value.
    pub fn point_mass(value: u32) -> Result<Self> {
        Self::new([(value, 1.0)])
    }

    pub fn prob(&self, value: u32) -> f64 {
        match self.values.binary_search(&value) {
            Ok(i) => self.probs[i],
            Err(_) => 0.0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.values.iter().copied().zip(self.probs.iter().copied())
    }

    pub fn support(&self) -> &[u32] {
        &self.values
    }

    pub fn max_value(&self) -> u32 {
        self.values.last().copied().unwrap_or(0)
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(v, p)| v as f64 * p).sum()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn sampler(&self) -> PmfSampler<'_> {
        // Masses are validated finite, nonnegative and not all zero.
        let index = WeightedIndex::new(&self.probs).expect("validated weights");
        PmfSampler { pmf: self, index }
    }
}

impl TryFrom<BTreeMap<u32, f64>> for Pmf {
    type Error = Error;

    fn try_from(map: BTreeMap<u32, f64>) -> Result<Self> {
        Self::new(map)
    }
}

impl From<Pmf> for BTreeMap<u32, f64> {
    fn from(pmf: Pmf) -> Self {
        pmf.values.into_iter().zip(pmf.probs).collect()
    }
}

/// Prebuilt alias-free sampler for a [`Pmf`].
#[derive(Debug, Clone)]
pub struct PmfSampler<'a> {
    pmf: &'a Pmf,
    index: WeightedIndex<f64>,
}

impl PmfSampler<'_> {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.pmf.values[self.index.sample(rng)]
    }
}

/// Poisson pmf with the given mean over `0..len`.
pub fn poisson_pmf(mean: f64, len: usize) -> Vec<f64> {
    (0..len)
        .map(|k| {
            if mean == 0.0 {
                return if k == 0 { 1.0 } else { 0.0 };
            }
            let k = k as f64;
            libm::exp(k * libm::log(mean) - mean - libm::lgamma(k + 1.0))
        })
        .collect()
}

/// Geometric pmf on `{1, 2, ...}` with success probability `p` (mean `1/p`).
pub fn geometric_pmf(p: f64, k: u32) -> f64 {
    if k == 0 {
        return 0.0;
    }
    libm::pow(1.0 - p, (k - 1) as f64) * p
}

/// `Pr(G >= k)` for the same geometric law.
pub fn geometric_ccdf(p: f64, k: u32) -> f64 {
    if k <= 1 {
        return 1.0;
    }
    libm::pow(1.0 - p, (k - 1) as f64)
}
