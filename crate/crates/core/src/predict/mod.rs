//! Lead-size Markov chain forecasts and their out-of-sample evaluation.

mod chain;
mod evaluate;

pub use chain::{
    build_chain, expected_remaining_events, forecast, leader_wins, LeadChain, LeaderCall, OutcomeForecast,
    OutcomeTable,
};
pub use evaluate::{
    evaluate_predictability, evaluate_split, merge_splits, AucRow, EvalConfig, Predictability, SplitScores,
    TieMode,
};
