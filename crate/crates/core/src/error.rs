//! Error type shared by every raster operation in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing header field `{0}`")]
    MissingHeaderField(&'static str),

    #[error("unexpected header field `{0}`")]
    UnexpectedHeaderField(String),

    #[error("header field `{key}` has non-numeric value `{value}`")]
    NonNumericHeaderValue { key: String, value: String },

    #[error("non-numeric token `{token}` at row {row}, col {col}")]
    NonNumericToken {
        row: usize,
        col: usize,
        token: String,
    },

    #[error("cell count mismatch: header implies {expected} cells, data holds {found}")]
    CellCountMismatch { expected: usize, found: usize },

    #[error("non-positive dimension: {key} = {value}")]
    NonPositiveDimension { key: &'static str, value: i64 },

    #[error("non-positive cellsize: {0}")]
    NonPositiveCellsize(f64),

    /// Two grids that had to share a header differ in at least one field.
    /// The message always names the first differing field.
    #[error("grids are not aligned: {0}")]
    GridMismatch(String),

    #[error("grid is {nrows}x{ncols}; slope needs at least 3x3")]
    GridTooSmall { nrows: usize, ncols: usize },

    #[error("threshold must be positive, got {0}")]
    NonPositiveThreshold(f64),

    #[error("slope threshold must lie in (0, 90) degrees, got {0}")]
    ThresholdOutOfRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid class code {value} at row {row}, col {col}")]
    InvalidClassCode { row: usize, col: usize, value: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
