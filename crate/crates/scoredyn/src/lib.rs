//! File formats, model artifacts, parallel drivers and the command line for
//! [`scoredyn_core`].

pub mod artifact;
pub mod cli;
pub mod curves;
pub mod formats;
pub mod io;
pub mod parallel;

pub use artifact::{ModelArtifact, TruthSidecar, SCHEMA_VERSION};
pub use formats::{parse_event_file, read_events, write_events, EventFormat, ReadError};
