//! Crate-wide error type.
//!
//! Validation failures carry enough context to name the offending sample,
//! row, or parameter; the CLI surfaces `Display` output directly, so messages
//! are written for end users.

use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter failed validation; the message states the violated rule.
    #[error("{0}")]
    Config(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("duplicate id {id:?}")]
    DuplicateId { id: String },

    #[error("duplicate class name {name:?}")]
    DuplicateClass { name: String },

    #[error("unknown id {id:?}")]
    UnknownId { id: String },

    #[error("id {id:?} has no label")]
    MissingLabel { id: String },

    #[error("class index {class} out of range for {k} classes")]
    ClassOutOfRange { class: usize, k: usize },

    #[error("class {class} has no members")]
    EmptyClass { class: usize },

    #[error("non-finite feature value at row {row}, column {col}")]
    NonFiniteFeature { row: usize, col: usize },

    #[error("k = {k} out of range for {n} samples (need 1 <= k < n)")]
    KOutOfRange { k: usize, n: usize },

    #[error("degenerate dataset: median pairwise distance is zero")]
    DegenerateDataset,

    #[error("row {row} assigned a label more than once")]
    DuplicateRowAssignment { row: usize },

    #[error("linear solve stalled at residual {residual:e} without converging")]
    LinearSolveStalled { residual: f64 },

    #[error("singular system: zero pivot during elimination")]
    SingularSystem,

    #[error("problem size {n} exceeds the dense-oracle limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("crop rectangle x={x} y={y} w={w} h={h} out of bounds for {width}x{height} image")]
    CropOutOfBounds { x: usize, y: usize, w: usize, h: usize, width: usize, height: usize },

    #[error("sample buffer holds {found} values, geometry requires {expected}")]
    SampleCountMismatch { expected: usize, found: usize },
}
