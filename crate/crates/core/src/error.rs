use std::path::PathBuf;

use thiserror::Error;

use crate::channels::ChannelKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension {0} is not supported (expected 2 or 4)")]
    UnsupportedDimension(usize),

    #[error("matrix is not Hermitian within tolerance {0}")]
    NotHermitian(f64),

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid qubit index {0} (register has 2 qubits)")]
    InvalidQubit(usize),

    #[error("CNOT control and target must differ (both {0})")]
    SameControlTarget(usize),

    #[error("operation is not unitary: {0:?}")]
    NotUnitary(ChannelKind),

    #[error("parameter shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("density matrix invariant violated after instruction {index}: {reason}")]
    InvalidState { index: usize, reason: String },

    #[error("expectation value has imaginary residue {0:e}")]
    ImaginaryExpectation(f64),

    #[error("unknown channel kind {0:?}")]
    UnknownChannel(String),

    #[error("line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },

    #[error("unknown species {0:?}")]
    UnknownSpecies(String),

    #[error("dataset must contain both classes")]
    MissingClass,

    #[error("split ratio {0} must lie strictly between 0 and 1")]
    InvalidRatio(f64),

    #[error("split produced an empty {0} set")]
    EmptySplit(&'static str),

    #[error("training split is empty")]
    EmptyTrainingSet,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
