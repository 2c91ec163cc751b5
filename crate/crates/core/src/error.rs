use thiserror::Error;

use crate::markov::ValidationReport;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rank {0} is outside 1..=26")]
    RankOutOfRange(usize),

    #[error("letter index {index} is outside the alphabet of rank {rank}")]
    LetterOutOfRange { index: usize, rank: usize },

    #[error("invalid character {ch:?} at position {position}")]
    InvalidCharacter { ch: char, position: usize },

    #[error("alphabet mismatch: rank {left} vs rank {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("tuple is empty")]
    EmptyTuple,

    #[error("word {index} of the tuple is empty")]
    EmptyWord { index: usize },

    #[error("word {index} is not cyclically reduced")]
    NotCyclicallyReduced { index: usize },

    #[error("{what}: requested {requested} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("invalid lambda {0}: expected p/q with 0 < p < q")]
    InvalidLambda(String),

    #[error("prefix length {prefix} exceeds the shortest word length {min}")]
    PrefixTooLong { prefix: usize, min: usize },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("automaton has a cycle of probability 1")]
    ProbabilityOneCycle,

    #[error("invalid automaton:\n{0}")]
    InvalidAutomaton(ValidationReport),

    #[error("rejection sampling gave up after {0} attempts")]
    AttemptsExhausted(usize),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by a configured resource cap.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::AttemptsExhausted(_) | Error::NonConvergence { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
