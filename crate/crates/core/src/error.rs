//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("categorical attribute `{name}` declares {levels} level(s); at least 2 required")]
    TooFewLevels { name: String, levels: usize },
    #[error("schema declares no attributes")]
    EmptySchema,
    #[error("malformed schema document: {0}")]
    SchemaFormat(String),
    #[error("column mismatch: {0}")]
    ColumnMismatch(String),
    #[error("row {row}: unknown level `{value}` for attribute `{attr}`")]
    UnknownLevel { row: usize, attr: String, value: String },
    #[error("row {row}: missing value for attribute `{attr}`")]
    MissingValue { row: usize, attr: String },
    #[error("row {row}: non-finite or non-numeric value `{value}` for attribute `{attr}`")]
    BadNumeric { row: usize, attr: String, value: String },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("distance {distance} exceeds last bin edge {edge}")]
    DistanceOutOfRange { distance: f64, edge: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
}
