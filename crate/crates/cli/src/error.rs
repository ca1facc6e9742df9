use std::path::PathBuf;

use bicrossed::matched::MatchedError;
use bicrossed::padic::PAdicError;
use bicrossed::pentagon::PentagonError;
use bicrossed::ring::RingError;
use bicrossed::unitary::UnitaryError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse {what} at line {line}, column {column}: {message}")]
    Parse {
        what: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema {0:?}, expected {expected:?}", expected = crate::SCHEMA)]
    Schema(String),
    #[error("unknown check {check:?} for a {subject} subject; known: {known}")]
    UnknownCheck {
        subject: &'static str,
        check: String,
        known: String,
    },
    #[error("bad subject: {0}")]
    Subject(String),
    #[error("{0}")]
    Input(String),
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Matched(#[from] MatchedError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    PAdic(#[from] PAdicError),
    #[error(transparent)]
    Pentagon(#[from] PentagonError),
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
}

impl CliError {
    pub fn json(what: &str, e: &serde_json::Error) -> Self {
        CliError::Parse {
            what: what.to_string(),
            line: e.line(),
            column: e.column(),
            // serde_json appends its own position; keep only the message.
            message: e
                .to_string()
                .rsplit_once(" at line ")
                .map_or_else(|| e.to_string(), |(m, _)| m.to_string()),
        }
    }
}
