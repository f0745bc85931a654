use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} features, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("label {0} is not part of the state alphabet")]
    UnknownLabel(u32),

    #[error("empty preparatory set")]
    EmptyPreparatorySet,

    #[error("detector used before prepare")]
    NotPrepared,

    #[error("model has not seen any instance")]
    EmptyModel,

    #[error("non-finite feature value at index {0}")]
    NonFiniteFeature(usize),

    #[error("signal {0} is not binary")]
    NonBinarySignal(f64),

    #[error("grid still has {0} unassigned cells after the generation cap")]
    GenerationCap(usize),

    #[error("value {value} outside domain of {concept}")]
    DomainViolation { concept: String, value: String },

    #[error("reference time {t_ref} out of range for {len} steps")]
    ReferenceOutOfRange { t_ref: usize, len: usize },

    #[error("{path}: line {line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("run {scheme} failed: {message}")]
    Run { scheme: String, message: String },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
