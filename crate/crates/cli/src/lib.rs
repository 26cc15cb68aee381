//! File formats and command plumbing for the `ssgl` binary.
//!
//! Everything here is std-side glue: strict CSV and edge-list codecs, JSON
//! report shapes, the augmentation op grammar, and atomic file writes. The
//! algorithms live in `ssgl-core`.

use std::path::Path;

pub mod augment;
pub mod formats;

/// Errors surfaced to the user; every variant maps to exit code 1.
/// Usage errors (unknown flags, missing arguments) never reach this type:
/// the argument parser reports them itself with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Core(#[from] ssgl_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// Prefixes the message with the file it came from.
    pub fn in_file(self, path: &Path) -> Self {
        CliError::Data(format!("{}: {self}", path.display()))
    }
}

pub fn data_error(message: impl Into<String>) -> CliError {
    CliError::Data(message.into())
}
