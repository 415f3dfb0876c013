//! Prediction files: JSON Lines with `id` and `scores`, where `scores` is an
//! array of `[label-IRI, score]` pairs sorted by score descending. Any
//! conforming file evaluates, including ones produced by external trainers.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use lmtc_core::metrics::ScoreMatrix;
use lmtc_core::taxonomy::ConceptId;

use super::FormatError;

#[derive(Serialize, Deserialize)]
struct Row {
    id: String,
    scores: Vec<(ConceptId, f64)>,
}

pub fn save_predictions(scores: &ScoreMatrix, path: &Path) -> Result<(), FormatError> {
    let file = fs::File::create(path).map_err(|e| FormatError::io(path, e))?;
    let mut out = BufWriter::new(file);
    for (id, row) in scores.rows() {
        let line = Row { id: id.to_string(), scores: row.to_vec() };
        let json = serde_json::to_string(&line)
            .map_err(|e| FormatError::file(path, format!("serialize `{id}`: {e}")))?;
        out.write_all(json.as_bytes()).map_err(|e| FormatError::io(path, e))?;
        out.write_all(b"\n").map_err(|e| FormatError::io(path, e))?;
    }
    out.flush().map_err(|e| FormatError::io(path, e))
}

pub fn load_predictions(path: &Path) -> Result<ScoreMatrix, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let mut rows: BTreeMap<String, Vec<(ConceptId, f64)>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Row = serde_json::from_str(line)
            .map_err(|e| FormatError::schema(path, i + 1, e.to_string()))?;
        if rows.insert(row.id.clone(), row.scores).is_some() {
            return Err(FormatError::schema(path, i + 1, format!("duplicate id `{}`", row.id)));
        }
    }
    ScoreMatrix::new(rows).map_err(|e| FormatError::file(path, e.to_string()))
}
