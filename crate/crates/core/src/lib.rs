//! Tempo, balance and lead-size models of within-game scoring.
//!
//! Scoring in a two-team game is split into two processes:
//!
//! - *tempo*: when scoring events happen, modeled as a (possibly
//!   inhomogeneous) per-second Bernoulli/Poisson process;
//! - *balance*: which team wins each event, modeled as a Bernoulli process
//!   whose bias may depend on the current lead.
//!
//! This crate fits both processes from event logs ([`estimate`]), generates
//! games under the four Bernoulli/Markov combinations ([`simulate`]), turns the
//! lead-dependent balance into an explicit lead-size Markov chain for outcome
//! forecasts ([`predict`]), and produces synthetic leagues with known ground
//! truth ([`synth`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, JSON artifacts
//! and the command line live in the companion `scoredyn` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod estimate;
pub mod ingest;
pub mod pmf;
pub mod predict;
pub mod rng;
pub mod simulate;
pub mod stats;
pub mod synth;
pub mod types;

pub use error::{Error, IngestError, Result};
pub use pmf::Pmf;
pub use types::{GameLog, LeadTrajectory, ScoringEvent, SportConfig, SportId, Team};
