// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use serde_json::json;
use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] ordkl_core::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0} validation check(s) failed")]
    ValidationFailed(usize),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } | CliError::Csv(_) | CliError::Json(_) => "io",
            CliError::Core(_) => "computation",
            CliError::ValidationFailed(_) => "validation",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }

    /// Machine-readable error record.
    pub fn record(&self) -> serde_json::Value {
        json!({
            "schema_version": crate::output::SCHEMA_VERSION,
            "error": { "kind": self.kind(), "message": self.to_string() },
        })
    }
}
