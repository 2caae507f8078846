use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid sport configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid distribution: {0}")]
    InvalidPmf(String),
    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("game {game_id} belongs to sport {found}, expected {expected}")]
    SportMismatch {
        game_id: String,
        expected: String,
        found: String,
    },
    #[error("no inter-arrival gaps: every game has fewer than two events")]
    NoGaps,
    #[error("no scoring events in corpus")]
    NoEvents,
    #[error("correlation undefined: every game was excluded")]
    NoUsableGames,
    #[error("need at least {needed} {what}, got {got}")]
    TooFew {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("every test game is tied at the end of regulation")]
    AllTestGamesTied,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}

/// A record-level ingest failure, located by source line and field name.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: field `{field}`: {message}")]
pub struct IngestError {
    pub line: usize,
    pub field: &'static str,
    pub message: String,
}
