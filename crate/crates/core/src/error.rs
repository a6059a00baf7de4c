use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot select from an empty population")]
    EmptyPopulation,
    #[error("genome could not be decoded: {0}")]
    InvalidGenome(String),
    #[error("structure has no blocks")]
    InvalidStructure,
    #[error("genome lengths differ: {0} vs {1}")]
    GenomeMismatch(usize, usize),
    #[error("solution is feasible; inverse-violation fitness is undefined")]
    NotInfeasible,
    #[error("both populations are empty; nothing to evolve")]
    EmptyRun,
    #[error("initialization budget of {0} attempts produced no solutions")]
    InitFailure(usize),
    #[error("offspring event has a feasible parent; the ledger only tracks infeasible parents")]
    IgnoredEvent,
    #[error("ledger entry has no recorded offspring")]
    NoOffspringYet,
    #[error("no training examples supplied")]
    NoData,
    #[error("feature vector has dimension {got}, expected {expected}")]
    FeatureDim { expected: usize, got: usize },
    #[error("behavior descriptor is not finite")]
    InvalidBehavior,
    #[error("grid has no occupied bins")]
    EmptyGrid,
    #[error("invalid config at `{path}`: {reason}")]
    Config { path: String, reason: String },
    #[error("summaries cover different seed sets: {0}")]
    SeedMismatch(String),
    #[error("{0}")]
    Usage(String),
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<String>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
