use std::path::PathBuf;

use thiserror::Error;

use crate::index::ObjType;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoordError {
    #[error("declination {0} is outside [-90, 90]")]
    DecOutOfRange(f64),
    #[error("coordinate is not finite")]
    NonFinite,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("zone height must be a positive finite number of degrees, got {0}")]
    ZoneHeight(f64),
    #[error("theta must lie in (0, 90) degrees, got {0}")]
    Theta(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("duplicate object {obj_type}:{obj_id}")]
    Duplicate { obj_type: ObjType, obj_id: i64 },
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("reading index file: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported index format version {found} (expected {expected})")]
    VersionMismatch { found: String, expected: u32 },
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("truncated body: header declares {expected} entries, found {found}")]
    TruncatedBody { expected: usize, found: usize },
    #[error("body has more entries than the {expected} declared in the header")]
    ExtraEntries { expected: usize },
    #[error("malformed entry on line {line}: {reason}")]
    MalformedEntry { line: usize, reason: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("radius {theta} exceeds the trimmed-margin design radius {design}")]
    ExceedsDesignRadius { theta: f64, design: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchError {
    #[error("match radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("match radius {theta} exceeds the index design radius {design}")]
    ExceedsDesignRadius { theta: f64, design: f64 },
    #[error("indices were built with different zone heights ({0} vs {1})")]
    ZoneHeightMismatch(f64, f64),
    #[error("cross-match of {0} against itself in one index; use a self-match")]
    SameDataset(ObjType),
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("building worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("opening {path}: {source}")]
    Open {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("column {0:?} not found in header")]
    MissingColumn(String),
    #[error("row {row}: column {column} has non-numeric value {value:?}")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: latitude {value} is outside [-90, 90]")]
    LatOutOfRange { row: usize, value: f64 },
    #[error("row {row}: invalid object id {value:?}")]
    BadId { row: usize, value: String },
    #[error("row {row}: duplicate object id {id}")]
    DuplicateId { row: usize, id: i64 },
}

/// Union of every error the library can return.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}
