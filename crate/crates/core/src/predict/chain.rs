use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::LeadFunction;
use crate::pmf::Pmf;
use crate::types::Team;

/// Finite Markov chain on the leads `-lmax..=lmax`.
///
/// From lead `L`, an event worth `k` points moves to `L + k` with probability
/// `phi(L) * Pr(k)` and to `L - k` with `(1 - phi(L)) * Pr(k)`; moves past
/// the boundary land on it.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadChain {
    lmax: u32,
    phi: Vec<f64>,
    points: Pmf,
    /// Dense row-major transition matrix.
    matrix: Vec<f64>,
    /// Nonzero entries of each row.
    sparse: Vec<Vec<(usize, f64)>>,
    /// `phi(-L) + phi(L) == 1` exactly; forecasts are then mirrored
    /// rather than recomputed so that the symmetry survives round-off.
    symmetric: bool,
}

pub fn build_chain(phi: &LeadFunction, points: &Pmf, lmax: u32) -> Result<LeadChain> {
    if lmax < points.max_value() {
        return Err(Error::InvalidArgument(format!(
            "lead truncation {lmax} below max point value {}",
            points.max_value()
        )));
    }
    let bound = lmax as i64;
    let size = 2 * lmax as usize + 1;
    let phi_states: Vec<f64> = (-bound..=bound).map(|l| phi.at(l)).collect();
    let mut matrix = vec![0.0; size * size];
    for (i, &up) in phi_states.iter().enumerate() {
        let lead = i as i64 - bound;
        let row = &mut matrix[i * size..(i + 1) * size];
        for (k, pk) in points.iter() {
            let k = k as i64;
            row[((lead + k).min(bound) + bound) as usize] += up * pk;
            row[((lead - k).max(-bound) + bound) as usize] += (1.0 - up) * pk;
        }
    }
    let sparse = matrix
        .chunks(size)
        .map(|row| row.iter().copied().enumerate().filter(|&(_, p)| p > 0.0).collect())
        .collect();
    let symmetric = phi_states[lmax as usize] == 0.5
        && phi_states.iter().zip(phi_states.iter().rev()).all(|(a, b)| a + b == 1.0);
    Ok(LeadChain {
        lmax,
        symmetric,
        phi: phi_states,
        points: points.clone(),
        matrix,
        sparse,
    })
}

impl LeadChain {
    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    pub fn states(&self) -> RangeInclusive<i64> {
        -(self.lmax as i64)..=self.lmax as i64
    }

    pub fn size(&self) -> usize {
        self.phi.len()
    }

    pub fn points(&self) -> &Pmf {
        &self.points
    }

    pub fn phi(&self, lead: i64) -> f64 {
        self.phi[self.index(lead)]
    }

    fn index(&self, lead: i64) -> usize {
        let b = self.lmax as i64;
        (lead.clamp(-b, b) + b) as usize
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn row(&self, lead: i64) -> &[f64] {
        let i = self.index(lead);
        &self.matrix[i * self.size()..(i + 1) * self.size()]
    }

    /// `P[from, to]`.
    pub fn transition(&self, from: i64, to: i64) -> f64 {
        self.row(from)[self.index(to)]
    }

    fn check_lead(&self, lead: i64) -> Result<()> {
        let b = self.lmax as i64;
        if lead.abs() > b {
            return Err(Error::OutOfRange {
                what: "lead",
                value: lead,
                lo: -b,
                hi: b,
            });
        }
        Ok(())
    }

    /// One application of `P` to a distribution over states.
    pub fn step(&self, dist: &[f64]) -> Vec<f64> {
        let mut next = vec![0.0; self.size()];
        for (i, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(j, p) in &self.sparse[i] {
                next[j] += mass * p;
            }
        }
        next
    }

    /// Distribution over states after `steps` events starting from `lead`.
    pub fn propagate(&self, lead: i64, steps: usize) -> Result<Vec<f64>> {
        self.check_lead(lead)?;
        let mut dist = vec![0.0; self.size()];
        dist[self.index(lead)] = 1.0;
        for _ in 0..steps {
            dist = self.step(&dist);
        }
        Ok(dist)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn forecast_steps(&self, lead: i64, steps: usize) -> Result<OutcomeForecast> {
        if self.symmetric && lead < 0 {
            self.check_lead(lead)?;
            return Ok(self.forecast_steps(-lead, steps)?.swapped());
        }
        let dist = self.propagate(lead, steps)?;
        let mid = self.lmax as usize;
        let f = OutcomeForecast {
            p_win_r: dist[mid + 1..].iter().sum(),
            p_tie: dist[mid],
            p_win_b: dist[..mid].iter().sum(),
        };
        Ok(if self.symmetric && lead == 0 { f.balanced() } else { f })
    }

    /// Forecasts for every state and every step count up to `max_steps`,
    /// by backward recursion over the number of remaining events.
    pub fn outcome_table(&self, max_steps: usize) -> OutcomeTable {
        let size = self.size();
        let mid = self.lmax as usize;
        let terminal: Vec<OutcomeForecast> = (0..size)
            .map(|i| match i.cmp(&mid) {
                core::cmp::Ordering::Greater => OutcomeForecast::new(1.0, 0.0, 0.0),
                core::cmp::Ordering::Equal => OutcomeForecast::new(0.0, 1.0, 0.0),
                core::cmp::Ordering::Less => OutcomeForecast::new(0.0, 0.0, 1.0),
            })
            .collect();
        let mut rows = Vec::with_capacity(max_steps + 1);
        rows.push(terminal);
        for k in 1..=max_steps {
            let prev = &rows[k - 1];
            let mut next: Vec<OutcomeForecast> = self.sparse
                .iter()
                .map(|row| {
                    let mut f = OutcomeForecast::new(0.0, 0.0, 0.0);
                    for &(j, p) in row {
                        f.p_win_r += p * prev[j].p_win_r;
                        f.p_tie += p * prev[j].p_tie;
                        f.p_win_b += p * prev[j].p_win_b;
                    }
                    f
                })
                .collect();
            if self.symmetric {
                for i in 0..mid {
                    next[i] = next[size - 1 - i].swapped();
                }
                next[mid] = next[mid].balanced();
            }
            rows.push(next);
        }
        OutcomeTable { lmax: self.lmax, rows }
    }
}

/// Precomputed forecasts indexed by remaining steps and lead.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    lmax: u32,
    rows: Vec<Vec<OutcomeForecast>>,
}

impl OutcomeTable {
    pub fn max_steps(&self) -> usize {
        self.rows.len() - 1
    }

    /// Leads beyond the truncation are clamped; `steps` must not exceed
    /// [`max_steps`](Self::max_steps).
    pub fn get(&self, lead: i64, steps: usize) -> Result<OutcomeForecast> {
        let b = self.lmax as i64;
        let row = self.rows.get(steps).ok_or(Error::OutOfRange {
            what: "steps",
            value: steps as i64,
            lo: 0,
            hi: self.max_steps() as i64,
        })?;
        Ok(row[(lead.clamp(-b, b) + b) as usize])
    }
}

/// Outcome probabilities at the end of regulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeForecast {
    pub p_win_r: f64,
    pub p_tie: f64,
    pub p_win_b: f64,
}

impl OutcomeForecast {
    pub fn new(p_win_r: f64, p_tie: f64, p_win_b: f64) -> Self {
        Self { p_win_r, p_tie, p_win_b }
    }

    pub fn total(&self) -> f64 {
        self.p_win_r + self.p_tie + self.p_win_b
    }

    /// The more likely winner; `None` on an exact tie between the two.
    pub fn favored(&self) -> Option<Team> {
        if self.p_win_r > self.p_win_b {
            Some(Team::R)
        } else if self.p_win_b > self.p_win_r {
            Some(Team::B)
        } else {
            None
        }
    }

    fn balanced(&self) -> Self {
        let w = 0.5 * (self.p_win_r + self.p_win_b);
        Self {
            p_win_r: w,
            p_tie: self.p_tie,
            p_win_b: w,
        }
    }

    /// The same forecast with r and b exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p_win_r: self.p_win_b,
            p_tie: self.p_tie,
            p_win_b: self.p_win_r,
        }
    }
}

/// `n = sum of profile[w] for w in t..=T`.
pub fn expected_remaining_events(profile: &[f64], t: u32) -> Result<f64> {
    let t = t as usize;
    if t >= profile.len() {
        return Err(Error::OutOfRange {
            what: "t",
            value: t as i64,
            lo: 0,
            hi: profile.len() as i64 - 1,
        });
    }
    let n: f64 = profile[t..].iter().sum();
    if !n.is_finite() {
        return Err(Error::NonFinite("expected remaining events"));
    }
    Ok(n)
}

/// Forecast from `lead` at clock second `t`, applying the chain
/// `round(n)` times where `n` counts the events expected in `t..=T`.
pub fn forecast(chain: &LeadChain, lead: i64, t: u32, profile: &[f64]) -> Result<OutcomeForecast> {
    let n = expected_remaining_events(profile, t)?;
    chain.forecast_steps(lead, libm::round(n) as usize)
}

/// The "leader wins" call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeaderCall {
    R,
    B,
    Abstain,
}

impl LeaderCall {
    /// 1 for a correct call, 0 for a wrong one, 1/2 for an abstention.
    pub fn score(self, winner: Team) -> f64 {
        match (self, winner) {
            (LeaderCall::Abstain, _) => 0.5,
            (LeaderCall::R, Team::R) | (LeaderCall::B, Team::B) => 1.0,
            _ => 0.0,
        }
    }
}

impl From<Option<Team>> for LeaderCall {
    fn from(t: Option<Team>) -> Self {
        match t {
            Some(Team::R) => LeaderCall::R,
            Some(Team::B) => LeaderCall::B,
            None => LeaderCall::Abstain,
        }
    }
}

pub fn leader_wins(lead: i64) -> LeaderCall {
    match lead.signum() {
        1 => LeaderCall::R,
        -1 => LeaderCall::B,
        _ => LeaderCall::Abstain,
    }
}
