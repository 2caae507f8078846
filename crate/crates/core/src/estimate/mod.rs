//! Empirical fits of tempo and balance.

mod balance;
mod correlation;
mod tempo;

pub use balance::{
    balance_fraction, balance_fractions, balance_null_distribution, fit_balance, lead_scoring_function,
    point_value_distribution, points_fraction_distribution, BalanceComparison, BalanceModel, LeadFunction,
    LeadScoring, NullBalance, DEFAULT_MIN_STATE_COUNT,
};
pub use correlation::{correlation_from_gaps, correlation_function, Correlation};
pub use tempo::{
    events_per_game_distribution, fit_poisson_rate, fit_tempo, game_gaps, interarrival_distribution,
    poisson_rate_from_counts, tempo_profile, EventsPerGame, InterArrival, PoissonRate, TempoModel,
};
