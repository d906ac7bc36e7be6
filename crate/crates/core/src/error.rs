use crate::dataset::Label;

/// Errors produced by dataset ingestion, training, and classification.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A row of the input file could not be parsed. Carries the 1-based row number.
    #[error("ingestion error at row {row}: {reason}")]
    Ingestion { row: usize, reason: String },

    /// The input file contained no data rows.
    #[error("ingestion error: file contains no data rows")]
    EmptyFile,

    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Training data contains only one class.
    #[error("training error: all samples belong to class {0:?}")]
    SingleClass(Label),

    /// A class required for statistics is absent from the data.
    #[error("stats error: class {0:?} has no members")]
    MissingClass(Label),

    /// All raw weights are zero; Eq-style normalization is undefined.
    #[error("normalization error: all raw weights are zero")]
    ZeroWeightSum,

    /// Both class memberships underflowed to zero simultaneously.
    #[error("probability error: both log-memberships are -inf")]
    DegenerateMemberships,

    /// No fold of a cross-validation run trained successfully.
    #[error("evaluation error: no fold trained successfully")]
    AllFoldsFailed,

    /// Model (de)serialization failed.
    #[error("model format error: {0}")]
    ModelFormat(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
