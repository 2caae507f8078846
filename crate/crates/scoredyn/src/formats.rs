//! Event files: canonical CSV (`sport,game_id,team,t,points`, header row, LF
//! line endings) and JSONL with one record object per line.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use scoredyn_core::ingest::{assemble_games, to_records, RawEventRecord, SportRegistry};
use scoredyn_core::{GameLog, IngestError};
use serde::Serialize;

pub const COLUMNS: [&str; 5] = ["sport", "game_id", "team", "t", "points"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EventFormat {
    Csv,
    Jsonl,
}

impl EventFormat {
    /// Guesses from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Self::Csv),
            "jsonl" | "ndjson" => Some(Self::Jsonl),
            _ => None,
        }
    }

    pub fn resolve(explicit: Option<Self>, path: &Path) -> Result<Self, ReadError> {
        explicit
            .or_else(|| Self::from_path(path))
            .ok_or_else(|| ReadError::UnknownFormat(path.to_owned()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Ingest { path: PathBuf, source: IngestError },
    #[error("cannot tell the format of {} (use --format)", .0.display())]
    UnknownFormat(PathBuf),
}

fn row_error(line: usize, field: &'static str, message: impl Into<String>) -> IngestError {
    IngestError {
        line,
        field,
        message: message.into(),
    }
}

fn parse_int(text: &str, line: usize, field: &'static str) -> Result<i64, IngestError> {
    text.trim()
        .parse()
        .map_err(|_| row_error(line, field, format!("not an integer: {text:?}")))
}

fn read_csv(reader: impl Read) -> Result<Vec<RawEventRecord>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(|e| row_error(1, "header", e.to_string()))?.clone();
    let mut index = [0usize; 5];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| row_error(1, name, "missing column"))?;
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            row_error(line, "row", e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let get = |i: usize| row.get(index[i]).unwrap_or_default();
        out.push(RawEventRecord {
            line,
            sport: get(0).trim().to_owned(),
            game_id: get(1).to_owned(),
            team: get(2).trim().to_owned(),
            t: parse_int(get(3), line, "t")?,
            points: parse_int(get(4), line, "points")?,
        });
    }
    Ok(out)
}

fn read_jsonl(reader: impl BufRead) -> Result<Vec<RawEventRecord>, IngestError> {
    let mut out = Vec::new();
    for (i, text) in reader.lines().enumerate() {
        let line = i + 1;
        let text = text.map_err(|e| row_error(line, "row", e.to_string()))?;
        if text.trim().is_empty() {
            continue;
        }
        let obj: serde_json::Map<String, serde_json::Value> =
            serde_json::from_str(&text).map_err(|e| row_error(line, "row", e.to_string()))?;
        let field = |name: &'static str| obj.get(name).ok_or_else(|| row_error(line, name, "missing field"));
        let string = |name: &'static str| -> Result<String, IngestError> {
            match field(name)? {
                serde_json::Value::String(s) => Ok(s.clone()),
                serde_json::Value::Number(n) if name == "game_id" => Ok(n.to_string()),
                other => Err(row_error(line, name, format!("expected a string, got {other}"))),
            }
        };
        let int = |name: &'static str| -> Result<i64, IngestError> {
            let v = field(name)?;
            v.as_i64().ok_or_else(|| row_error(line, name, format!("expected an integer, got {v}")))
        };
        out.push(RawEventRecord {
            line,
            sport: string("sport")?,
            game_id: string("game_id")?,
            team: string("team")?,
            t: int("t")?,
            points: int("points")?,
        });
    }
    Ok(out)
}

/// Reads raw records in `format`.
pub fn read_records(reader: impl Read, format: EventFormat) -> Result<Vec<RawEventRecord>, IngestError> {
    match format {
        EventFormat::Csv => read_csv(reader),
        EventFormat::Jsonl => read_jsonl(BufReader::new(reader)),
    }
}

/// Reads and assembles games from any reader.
pub fn read_events(reader: impl Read, format: EventFormat, registry: &SportRegistry) -> Result<Vec<GameLog>, IngestError> {
    assemble_games(read_records(reader, format)?, registry)
}

/// Reads and assembles an event file; `format` defaults to the extension.
pub fn parse_event_file(path: &Path, format: Option<EventFormat>, registry: &SportRegistry) -> Result<Vec<GameLog>, ReadError> {
    let format = EventFormat::resolve(format, path)?;
    let file = File::open(path).map_err(|source| ReadError::Io {
        path: path.to_owned(),
        source,
    })?;
    read_events(BufReader::new(file), format, registry).map_err(|source| ReadError::Ingest {
        path: path.to_owned(),
        source,
    })
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    sport: &'a str,
    game_id: &'a str,
    team: &'a str,
    t: i64,
    points: i64,
}

/// Writes games in canonical form. Games without events leave no records.
pub fn write_events(writer: &mut dyn Write, games: &[GameLog], format: EventFormat) -> anyhow::Result<()> {
    let records = to_records(games);
    match format {
        EventFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(writer);
            w.write_record(COLUMNS)?;
            for r in &records {
                w.write_record([&r.sport, &r.game_id, &r.team, &r.t.to_string(), &r.points.to_string()])?;
            }
            w.flush()?;
        }
        EventFormat::Jsonl => {
            for r in &records {
                let rec = JsonRecord {
                    sport: &r.sport,
                    game_id: &r.game_id,
                    team: &r.team,
                    t: r.t,
                    points: r.points,
                };
                serde_json::to_writer(&mut *writer, &rec)?;
                writer.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}
