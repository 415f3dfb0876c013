//! EURLEX57K ingestion: one JSON document per file with `header`,
//! `recitals`, `main_body` (a list of articles) and `attachments` sections
//! plus a `concepts` list of EuroVoc codes.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::Deserialize;

use lmtc_core::corpus::{Corpus, CorpusSource, Document, Zones};
use lmtc_core::taxonomy::{ConceptId, LabelLevel};

use super::{file_stem_id, IngestError};

#[derive(Deserialize)]
struct Eurlex57kFile {
    #[serde(default)]
    celex_id: String,
    concepts: Vec<String>,
    #[serde(default)]
    header: String,
    #[serde(default)]
    recitals: String,
    #[serde(default)]
    main_body: Vec<String>,
    #[serde(default)]
    attachments: String,
}

/// Ingests EURLEX57K JSON files. All four zones are always present (possibly
/// empty); the `main_body` articles are joined with newlines. A missing
/// `concepts` field is an error.
pub fn ingest_eurlex57k(paths: &[PathBuf]) -> Result<Corpus, IngestError> {
    let mut docs: Vec<Document> = Vec::with_capacity(paths.len());
    for path in paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| IngestError::Io { path: path.clone(), source: e })?;
        let parsed: Eurlex57kFile = serde_json::from_str(&text)
            .map_err(|e| IngestError::Json { path: path.clone(), msg: e.to_string() })?;
        let id = if parsed.celex_id.is_empty() {
            file_stem_id(path)?
        } else {
            parsed.celex_id.clone()
        };
        let labels: BTreeSet<ConceptId> =
            parsed.concepts.iter().map(|code| ConceptId::eurovoc(code)).collect();
        if labels.is_empty() {
            return Err(IngestError::Json {
                path: path.clone(),
                msg: "empty `concepts` list".to_string(),
            });
        }
        let zones = Zones::from_pairs([
            ("header", parsed.header),
            ("recitals", parsed.recitals),
            ("main_body", parsed.main_body.join("\n")),
            ("attachments", parsed.attachments),
        ])?;
        docs.push(Document::new(id, "en", zones, labels)?);
    }
    Ok(Corpus::new(docs, LabelLevel::De, CorpusSource::Eurlex57k)?)
}
