//! Split files: a JSON header line with `seed`, `ratios`, `corpus_source`
//! and `n_docs`, followed by one `{"id": ..., "split": ...}` line per
//! document. Also imports directory-based reference splits
//! (`train/`/`dev/`/`test/` folders of per-document JSON files).

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use lmtc_core::split::{Split, SplitAssignment, SplitRatios};

use super::FormatError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitHeader {
    pub seed: u64,
    pub ratios: [f64; 3],
    pub corpus_source: String,
    pub n_docs: usize,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    id: String,
    split: Split,
}

pub fn save_split(
    assignment: &SplitAssignment,
    corpus_source: &str,
    path: &Path,
) -> Result<(), FormatError> {
    let file = fs::File::create(path).map_err(|e| FormatError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let ratios = assignment.ratios();
    let header = SplitHeader {
        seed: assignment.seed(),
        ratios: [ratios.train(), ratios.valid(), ratios.test()],
        corpus_source: corpus_source.to_string(),
        n_docs: assignment.len(),
    };
    {
        let mut write_line = |s: String| -> Result<(), FormatError> {
            out.write_all(s.as_bytes()).map_err(|e| FormatError::io(path, e))?;
            out.write_all(b"\n").map_err(|e| FormatError::io(path, e))
        };
        write_line(serde_json::to_string(&header).expect("header serializes"))?;
        for (id, split) in assignment.iter() {
            let entry = Entry { id: id.to_string(), split };
            write_line(serde_json::to_string(&entry).expect("entry serializes"))?;
        }
    }
    out.flush().map_err(|e| FormatError::io(path, e))
}

pub fn load_split(path: &Path) -> Result<(SplitAssignment, SplitHeader), FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let (_, header_line) = lines
        .next()
        .ok_or_else(|| FormatError::file(path, "empty split file"))?;
    let header: SplitHeader = serde_json::from_str(header_line)
        .map_err(|e| FormatError::schema(path, 1, format!("header: {e}")))?;
    let ratios = SplitRatios::new(header.ratios[0], header.ratios[1], header.ratios[2])
        .map_err(|e| FormatError::schema(path, 1, e.to_string()))?;

    let mut assignment: BTreeMap<String, Split> = BTreeMap::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let entry: Entry = serde_json::from_str(line)
            .map_err(|e| FormatError::schema(path, i + 1, e.to_string()))?;
        if assignment.insert(entry.id.clone(), entry.split).is_some() {
            return Err(FormatError::schema(path, i + 1, format!("duplicate id `{}`", entry.id)));
        }
    }
    if assignment.len() != header.n_docs {
        return Err(FormatError::file(
            path,
            format!("header says {} documents, file has {}", header.n_docs, assignment.len()),
        ));
    }
    Ok((SplitAssignment::new(assignment, header.seed, ratios), header))
}

/// Imports a directory-based reference split: subdirectories `train`, `dev`
/// (or `valid`) and `test` of per-document files; ids are the file stems.
/// Ratios are derived from the directory sizes, the seed is recorded as 0.
pub fn import_split_dir(root: &Path) -> Result<SplitAssignment, FormatError> {
    let mut assignment: BTreeMap<String, Split> = BTreeMap::new();
    let mut counts = [0usize; 3];
    for (names, part) in [
        (&["train"][..], Split::Train),
        (&["dev", "valid"][..], Split::Valid),
        (&["test"][..], Split::Test),
    ] {
        let dir = names
            .iter()
            .map(|n| root.join(n))
            .find(|p| p.is_dir())
            .ok_or_else(|| {
                FormatError::file(root, format!("missing split subdirectory `{}`", names[0]))
            })?;
        let mut entries: Vec<_> = fs::read_dir(&dir)
            .map_err(|e| FormatError::io(&dir, e))?
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| FormatError::io(&dir, e))?;
        entries.sort_by_key(|e| e.file_name());
        for entry in entries {
            let path = entry.path();
            if !path.is_file() {
                continue;
            }
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| FormatError::file(&path, "unreadable file name"))?
                .to_string();
            if assignment.insert(stem.clone(), part).is_some() {
                return Err(FormatError::file(&path, format!("duplicate document id `{stem}`")));
            }
            counts[match part {
                Split::Train => 0,
                Split::Valid => 1,
                Split::Test => 2,
            }] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(FormatError::file(root, "no documents found in split directories"));
    }
    let ratios = SplitRatios::new(
        counts[0] as f64 / total as f64,
        counts[1] as f64 / total as f64,
        counts[2] as f64 / total as f64,
    )
    .map_err(|e| FormatError::file(root, format!("degenerate split directory sizes: {e}")))?;
    Ok(SplitAssignment::new(assignment, 0, ratios))
}
