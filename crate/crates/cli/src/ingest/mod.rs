//! Dataset ingestion into the canonical corpus model.

mod eurlex;
mod jrc;

pub use eurlex::ingest_eurlex57k;
pub use jrc::ingest_jrc;

use std::path::{Path, PathBuf};

use lmtc_core::corpus::CorpusError;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} (byte {position}): {msg}")]
    Xml { path: PathBuf, position: u64, msg: String },
    #[error("{path}: {msg}")]
    Json { path: PathBuf, msg: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Non-fatal ingestion findings; callers decide whether to print them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IngestWarning {
    /// A document with no EuroVoc descriptors was skipped.
    SkippedNoDescriptors { path: PathBuf },
}

impl std::fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IngestWarning::SkippedNoDescriptors { path } => {
                write!(f, "skipped {}: no EuroVoc descriptors", path.display())
            }
        }
    }
}

/// The document id for a dataset file: its stem, e.g. `dir/31979D0509.json`
/// → `31979D0509`.
pub(crate) fn file_stem_id(path: &Path) -> Result<String, IngestError> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_string)
        .ok_or_else(|| IngestError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidInput, "unreadable file name"),
        })
}

/// All files under `dir` with the given extension, sorted by name so that
/// ingestion order never depends on directory enumeration order.
pub fn files_with_extension(dir: &Path, ext: &str) -> Result<Vec<PathBuf>, IngestError> {
    let entries = std::fs::read_dir(dir).map_err(|e| IngestError::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| IngestError::Io { path: dir.to_path_buf(), source: e })?;
        let path = entry.path();
        if path.is_file()
            && path
                .extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| e.eq_ignore_ascii_case(ext))
        {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}
