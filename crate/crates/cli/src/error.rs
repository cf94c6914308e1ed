// SPDX-License-Identifier: Apache-2.0

use std::io;
use std::path::PathBuf;

use crate::interchange;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{stage}: {}: {source}", path.display())]
    File {
        stage: &'static str,
        path: PathBuf,
        source: interchange::Error,
    },

    #[error("{stage}: {source}")]
    Core {
        stage: &'static str,
        source: mergesam_core::Error,
    },

    #[error("{stage}: {message}")]
    Validation { stage: &'static str, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::File { source, .. } if source.is_io() => EXIT_IO,
            CliError::Io { .. } => EXIT_IO,
            CliError::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_VALIDATION,
        }
    }

    pub(crate) fn file(stage: &'static str, path: impl Into<PathBuf>) -> impl FnOnce(interchange::Error) -> Self {
        let path = path.into();
        move |source| CliError::File { stage, path, source }
    }

    pub(crate) fn core(stage: &'static str) -> impl FnOnce(mergesam_core::Error) -> Self {
        move |source| CliError::Core { stage, source }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
