//! On-disk formats: the canonical JSONL corpus, split files, prediction
//! files, metric reports, and model checkpoints. All writers are
//! deterministic: identical inputs produce identical bytes.

mod checkpoint;
mod corpus_jsonl;
mod predictions;
mod report;
mod split_jsonl;

pub use checkpoint::{load_model, save_model, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use corpus_jsonl::{load_corpus_jsonl, save_corpus_jsonl};
pub use predictions::{load_predictions, save_predictions};
pub use report::{save_report, save_threshold_curve};
pub use split_jsonl::{import_split_dir, load_split, save_split, SplitHeader};

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Schema { path: PathBuf, line: usize, msg: String },
    #[error("{path}: {msg}")]
    File { path: PathBuf, msg: String },
}

impl FormatError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        FormatError::Io { path: path.to_path_buf(), source }
    }

    pub(crate) fn schema(path: &std::path::Path, line: usize, msg: impl Into<String>) -> Self {
        FormatError::Schema { path: path.to_path_buf(), line, msg: msg.into() }
    }

    pub(crate) fn file(path: &std::path::Path, msg: impl Into<String>) -> Self {
        FormatError::File { path: path.to_path_buf(), msg: msg.into() }
    }
}
