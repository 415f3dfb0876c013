//! The canonical corpus format: JSON Lines, one document per line with keys
//! `id`, `language`, `zones`, `labels` in that order, UTF-8, `\n` endings.
//!
//! The format carries documents only; the label level and source are
//! supplied by the caller on load. `load(save(c))` reproduces the corpus
//! exactly and re-saving is byte-stable.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use lmtc_core::corpus::{Corpus, CorpusSource, Document};
use lmtc_core::taxonomy::LabelLevel;

use super::FormatError;

pub fn save_corpus_jsonl(corpus: &Corpus, path: &Path) -> Result<(), FormatError> {
    let file = fs::File::create(path).map_err(|e| FormatError::io(path, e))?;
    let mut out = BufWriter::new(file);
    for doc in corpus.docs() {
        let line = serde_json::to_string(doc)
            .map_err(|e| FormatError::file(path, format!("serialize `{}`: {e}", doc.id)))?;
        out.write_all(line.as_bytes()).map_err(|e| FormatError::io(path, e))?;
        out.write_all(b"\n").map_err(|e| FormatError::io(path, e))?;
    }
    out.flush().map_err(|e| FormatError::io(path, e))
}

pub fn load_corpus_jsonl(
    path: &Path,
    label_level: LabelLevel,
    source: CorpusSource,
) -> Result<Corpus, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let mut docs: Vec<Document> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(line)
            .map_err(|e| FormatError::schema(path, i + 1, e.to_string()))?;
        doc.check()
            .map_err(|e| FormatError::schema(path, i + 1, e.to_string()))?;
        docs.push(doc);
    }
    Corpus::new(docs, label_level, source)
        .map_err(|e| FormatError::file(path, e.to_string()))
}
