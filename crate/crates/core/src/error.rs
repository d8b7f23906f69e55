use std::path::PathBuf;

use thiserror::Error;

/// Error taxonomy shared by every module of the crate.
///
/// Each variant corresponds to one named error class; [`FairnessError::code`]
/// returns the stable upper-case name used in reports and diagnostics.
#[derive(Debug, Error)]
pub enum FairnessError {
    #[error("REPRESENTATION_ERROR: {0}")]
    Representation(String),

    #[error("DATA_ERROR: {message}{}", row_suffix(.row))]
    Data { message: String, row: Option<usize> },

    #[error("MATRIX_INCOMPLETE: no distance for pair ({0}, {1})")]
    MatrixIncomplete(String, String),

    #[error("EMPTY_DATASET: {0}")]
    EmptyDataset(String),

    #[error("EMPTY_GROUP: group '{0}' has no records")]
    EmptyGroup(String),

    #[error("SCHEMA_ERROR: {message}{}", row_suffix(.row))]
    Schema { message: String, row: Option<usize> },

    #[error("CONFIG_ERROR: {0}")]
    Config(String),

    #[error("GENERATION_ERROR: {0}")]
    Generation(String),

    #[error("IO_ERROR: {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn row_suffix(row: &Option<usize>) -> String {
    match row {
        Some(r) => format!(" (row {r})"),
        None => String::new(),
    }
}

impl FairnessError {
    pub fn data(message: impl Into<String>) -> Self {
        FairnessError::Data {
            message: message.into(),
            row: None,
        }
    }

    pub fn data_at(message: impl Into<String>, row: usize) -> Self {
        FairnessError::Data {
            message: message.into(),
            row: Some(row),
        }
    }

    pub fn schema(message: impl Into<String>) -> Self {
        FairnessError::Schema {
            message: message.into(),
            row: None,
        }
    }

    pub fn schema_at(message: impl Into<String>, row: usize) -> Self {
        FairnessError::Schema {
            message: message.into(),
            row: Some(row),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            FairnessError::Representation(_) => "REPRESENTATION_ERROR",
            FairnessError::Data { .. } => "DATA_ERROR",
            FairnessError::MatrixIncomplete(..) => "MATRIX_INCOMPLETE",
            FairnessError::EmptyDataset(_) => "EMPTY_DATASET",
            FairnessError::EmptyGroup(_) => "EMPTY_GROUP",
            FairnessError::Schema { .. } => "SCHEMA_ERROR",
            FairnessError::Config(_) => "CONFIG_ERROR",
            FairnessError::Generation(_) => "GENERATION_ERROR",
            FairnessError::Io { .. } => "IO_ERROR",
        }
    }
}

pub type Result<T, E = FairnessError> = std::result::Result<T, E>;
