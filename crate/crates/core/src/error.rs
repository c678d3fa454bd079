use std::path::PathBuf;

use crate::corpus::Scenario;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {err}", path.display())]
    Io { path: PathBuf, err: std::io::Error },

    #[error("{}:{line}: {message}: {text:?}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        text: String,
        message: String,
    },

    #[error("{}: invalid document at byte offset {offset} (line {line}, column {column}): {message}: {text:?}", path.display())]
    Document {
        path: PathBuf,
        offset: usize,
        line: usize,
        column: usize,
        message: String,
        text: String,
    },

    #[error("{}: unsupported format_version {found} (expected {expected})", path.display())]
    VersionMismatch { path: PathBuf, expected: u32, found: u32 },

    #[error("unknown scenario {name:?}; valid scenarios are: {}", Scenario::valid_names())]
    UnknownScenario { name: String },

    #[error("duplicate sequence id {id:?}")]
    DuplicateId { id: String },

    #[error("sequence {id:?}: manifest frame_count {expected} but ground truth has {actual} frames")]
    FrameCountMismatch { id: String, expected: usize, actual: usize },

    #[error("missing result file for tracker {tracker:?}, pass {pass}, sequence {sequence:?}: {}", path.display())]
    MissingResult {
        tracker: String,
        pass: usize,
        sequence: String,
        path: PathBuf,
    },

    #[error("tracker {tracker:?}, pass {pass}, sequence {sequence:?}: expected {expected} frames, found {actual}")]
    LengthMismatch {
        tracker: String,
        pass: usize,
        sequence: String,
        expected: usize,
        actual: usize,
    },

    #[error("result set references unknown sequence {id:?}")]
    UnknownSequence { id: String },

    #[error("sequence has no evaluable frames")]
    NoEvaluableFrames,

    #[error("need >= 2 trackers to measure discrimination (found {found})")]
    TooFewTrackers { found: usize },

    #[error("undefined normalized std: mean is zero")]
    UndefinedNormalizedStd,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("ranking id sets differ")]
    RankingMismatch,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("sequence {id:?}: {inner}")]
    Sequence { id: String, inner: Box<Error> },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            err: source,
        }
    }

    pub(crate) fn in_sequence(self, id: &str) -> Self {
        Error::Sequence {
            id: id.to_string(),
            inner: Box::new(self),
        }
    }
}
