//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any affect-core operation.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A lexicon or dataset line failed to parse.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A parsed resource contained no usable entries.
    #[error("no entries")]
    NoEntries,

    /// More than half of a review stream failed validation.
    #[error("format mismatch: {rejected} of {total} lines rejected")]
    FormatMismatch { rejected: usize, total: usize },

    /// Input text is blank or whitespace-only.
    #[error("empty document")]
    EmptyDocument,

    /// A feature vector was offered to a component built for a different descriptor.
    #[error("{context}: descriptor mismatch: expected \"{expected}\", got \"{found}\"")]
    DescriptorMismatch {
        context: String,
        expected: String,
        found: String,
    },

    /// Training data contains only one class.
    #[error("degenerate labels: training data contains a single class")]
    DegenerateLabels,

    /// A feature value is NaN or infinite.
    #[error("non-finite feature value at index {index}")]
    NonFiniteFeature { index: usize },

    /// Vectors of differing dimension were mixed.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A class has fewer eligible records than requested.
    #[error("{class}: need {need}, have {have}")]
    ClassShortfall {
        class: String,
        need: usize,
        have: usize,
    },

    /// A class has fewer members than the number of folds.
    #[error("class \"{class}\" has {have} members, fewer than {folds} folds")]
    ClassSmallerThanFolds {
        class: String,
        have: usize,
        folds: usize,
    },

    /// A vocabulary ended up empty after filtering.
    #[error("empty vocabulary after filtering")]
    EmptyVocabulary,

    /// A model file carries an unsupported format version.
    #[error("unsupported model format version {found} (expected {expected})")]
    FormatVersion { found: u32, expected: u32 },

    /// An invalid configuration value.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
