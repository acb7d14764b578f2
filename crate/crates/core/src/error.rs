use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid identifier {0:?}: must be non-empty and contain no comma or line break")]
    InvalidIdentifier(String),

    #[error("{name} = {value} is outside [0, 1]")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("non-finite value {0}")]
    NonFinite(f64),

    #[error("no actions defined")]
    NoActions,

    #[error("unknown state {0}")]
    UnknownState(String),

    #[error("unknown action {0}")]
    UnknownAction(String),

    #[error("no training data")]
    NoTrainingData,

    #[error("iterations must be at least 1")]
    ZeroIterations,

    #[error("sample size must be at least 1")]
    ZeroSamples,

    #[error("model required for epsilon-greedy")]
    ModelRequired,

    #[error("illegal board {0}")]
    IllegalBoard(String),

    #[error("transition probabilities for ({state}, {action}) sum to {sum}")]
    NotStochastic {
        state: String,
        action: String,
        sum: f64,
    },

    #[error("value iteration did not reach tolerance {tol} within {sweeps} sweeps")]
    NotConverged { tol: f64, sweeps: usize },

    #[error("environment {0} does not expose an explicit transition model")]
    NoExplicitModel(String),

    #[error("unknown environment {0}")]
    UnknownEnvironment(String),

    #[error("column {0} not found")]
    MissingColumn(String),

    #[error("row {row}: cannot parse reward {value:?}")]
    BadReward { row: usize, value: String },

    #[error("row {row}: {message}")]
    BadRow { row: usize, message: String },

    #[error("model format version mismatch: found {found:?}, expected {expected:?}")]
    VersionMismatch { found: String, expected: String },

    #[error("malformed model file: {0}")]
    MalformedModel(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
