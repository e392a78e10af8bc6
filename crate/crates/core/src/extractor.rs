//! Extractor plugin contract.
//!
//! An extractor is any executable that, invoked as `<extractor> <source-path>`,
//! writes an interchange document to standard output and exits with status 0.
//! A nonzero status is an extraction failure; its standard error is kept for
//! the report.

use std::path::Path;
use std::process::Command;

use thiserror::Error;

use crate::graph::EntityGraph;
use crate::interchange::{self, InterchangeError};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("failed to launch extractor `{program}`: {source}")]
    Launch {
        program: String,
        #[source]
        source: std::io::Error,
    },
    #[error("extractor exited with {status}: {stderr}")]
    Failed { status: String, stderr: String },
    #[error("extractor produced an invalid document: {0}")]
    Document(#[from] InterchangeError),
}

/// Runs the extractor and returns the raw document bytes.
pub fn run_extractor(extractor: &Path, source: &Path) -> Result<Vec<u8>, ExtractError> {
    let output = Command::new(extractor)
        .arg(source)
        .output()
        .map_err(|source| ExtractError::Launch {
            program: extractor.display().to_string(),
            source,
        })?;
    if !output.status.success() {
        return Err(ExtractError::Failed {
            status: output.status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).trim().to_owned(),
        });
    }
    Ok(output.stdout)
}

/// Runs the extractor and parses what it printed.
pub fn extract(extractor: &Path, source: &Path) -> Result<EntityGraph, ExtractError> {
    let bytes = run_extractor(extractor, source)?;
    Ok(interchange::parse(&bytes)?)
}
