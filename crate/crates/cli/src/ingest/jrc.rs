//! JRC-Acquis V3 ingestion.
//!
//! Each file is a TEI document: zoned text under `<div type="body">`,
//! `<div type="signature">` and `<div type="annex">`, and EuroVoc descriptor
//! codes in `<classCode scheme="eurovoc">` elements. Zones absent from the
//! XML stay absent from the document. Files without any descriptor are
//! skipped with a warning.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use lmtc_core::corpus::{Corpus, CorpusSource, Document, Zones};
use lmtc_core::taxonomy::{ConceptId, LabelLevel};

use super::{file_stem_id, IngestError, IngestWarning};

const ZONE_ORDER: [&str; 3] = ["body", "signature", "annex"];

struct JrcDoc {
    language: String,
    zones: Vec<(String, Vec<String>)>, // zone → paragraphs
    labels: BTreeSet<ConceptId>,
}

fn xml_err(path: &Path, reader: &Reader<&[u8]>, msg: impl Into<String>) -> IngestError {
    IngestError::Xml {
        path: path.to_path_buf(),
        position: reader.buffer_position(),
        msg: msg.into(),
    }
}

fn attribute(
    path: &Path,
    reader: &Reader<&[u8]>,
    tag: &BytesStart<'_>,
    name: &str,
) -> Result<Option<String>, IngestError> {
    let attr = tag
        .try_get_attribute(name)
        .map_err(|e| xml_err(path, reader, e.to_string()))?;
    match attr {
        Some(a) => {
            let value = a
                .decode_and_unescape_value(reader.decoder())
                .map_err(|e| xml_err(path, reader, e.to_string()))?;
            Ok(Some(value.into_owned()))
        }
        None => Ok(None),
    }
}

fn parse_file(path: &Path, text: &str) -> Result<JrcDoc, IngestError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(false);

    let mut doc = JrcDoc { language: String::from("en"), zones: Vec::new(), labels: BTreeSet::new() };
    let mut zone: Option<usize> = None; // index into doc.zones
    let mut div_depth = 0usize;
    let mut in_paragraph = false;
    let mut paragraph = String::new();
    let mut in_class_code = false;
    let mut class_scheme_eurovoc = false;
    let mut class_code = String::new();

    loop {
        match reader.read_event() {
            Err(e) => return Err(xml_err(path, &reader, e.to_string())),
            Ok(Event::Eof) => break,
            Ok(Event::Start(tag)) => match tag.local_name().as_ref() {
                b"TEI.2" => {
                    if let Some(lang) = attribute(path, &reader, &tag, "lang")? {
                        if !lang.is_empty() {
                            doc.language = lang;
                        }
                    }
                }
                b"div" => {
                    div_depth += 1;
                    if div_depth == 1 {
                        let div_type = attribute(path, &reader, &tag, "type")?;
                        zone = div_type.and_then(|t| {
                            if ZONE_ORDER.contains(&t.as_str()) {
                                match doc.zones.iter().position(|(name, _)| name == &t) {
                                    Some(i) => Some(i),
                                    None => {
                                        doc.zones.push((t, Vec::new()));
                                        Some(doc.zones.len() - 1)
                                    }
                                }
                            } else {
                                None
                            }
                        });
                    }
                }
                b"p" => {
                    if zone.is_some() {
                        in_paragraph = true;
                        paragraph.clear();
                    }
                }
                b"classCode" => {
                    in_class_code = true;
                    class_code.clear();
                    class_scheme_eurovoc = attribute(path, &reader, &tag, "scheme")?
                        .is_some_and(|s| s.eq_ignore_ascii_case("eurovoc"));
                }
                _ => {}
            },
            Ok(Event::End(tag)) => match tag.local_name().as_ref() {
                b"div" => {
                    div_depth = div_depth.saturating_sub(1);
                    if div_depth == 0 {
                        zone = None;
                    }
                }
                b"p" => {
                    if in_paragraph {
                        in_paragraph = false;
                        if let Some(z) = zone {
                            let trimmed = paragraph.trim();
                            if !trimmed.is_empty() {
                                doc.zones[z].1.push(trimmed.to_string());
                            }
                        }
                    }
                }
                b"classCode" => {
                    if in_class_code && class_scheme_eurovoc {
                        let code = class_code.trim();
                        if !code.is_empty() {
                            doc.labels.insert(ConceptId::eurovoc(code));
                        }
                    }
                    in_class_code = false;
                }
                _ => {}
            },
            Ok(Event::Text(t)) => {
                let text = t
                    .xml_content()
                    .map_err(|e| xml_err(path, &reader, e.to_string()))?;
                if in_class_code {
                    class_code.push_str(&text);
                } else if in_paragraph {
                    paragraph.push_str(&text);
                }
            }
            Ok(Event::GeneralRef(r)) => {
                // Character and predefined entity references come as their
                // own events; resolve them back to text.
                let resolved = match r
                    .resolve_char_ref()
                    .map_err(|e| xml_err(path, &reader, e.to_string()))?
                {
                    Some(ch) => ch.to_string(),
                    None => {
                        let name = r.decode().map_err(|e| xml_err(path, &reader, e.to_string()))?;
                        quick_xml::escape::resolve_predefined_entity(&name)
                            .ok_or_else(|| {
                                xml_err(path, &reader, format!("unknown entity `&{name};`"))
                            })?
                            .to_string()
                    }
                };
                if in_class_code {
                    class_code.push_str(&resolved);
                } else if in_paragraph {
                    paragraph.push_str(&resolved);
                }
            }
            Ok(_) => {}
        }
    }
    Ok(doc)
}

/// Ingests JRC-Acquis XML files into a corpus at descriptor level. Documents
/// without descriptors are skipped and reported as warnings; the result is
/// sorted by id regardless of the path order given.
pub fn ingest_jrc(paths: &[PathBuf]) -> Result<(Corpus, Vec<IngestWarning>), IngestError> {
    let mut docs: Vec<Document> = Vec::with_capacity(paths.len());
    let mut warnings: Vec<IngestWarning> = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| IngestError::Io { path: path.clone(), source: e })?;
        let parsed = parse_file(path, &text)?;
        if parsed.labels.is_empty() {
            warnings.push(IngestWarning::SkippedNoDescriptors { path: path.clone() });
            continue;
        }
        let mut zones = Zones::new();
        let mut ordered = parsed.zones;
        ordered.sort_by_key(|(name, _)| {
            ZONE_ORDER.iter().position(|z| z == name).unwrap_or(ZONE_ORDER.len())
        });
        for (name, paragraphs) in ordered {
            zones.insert(name, paragraphs.join("\n"))?;
        }
        docs.push(Document::new(file_stem_id(path)?, parsed.language, zones, parsed.labels)?);
    }
    let corpus = Corpus::new(docs, LabelLevel::De, CorpusSource::Jrc)?;
    Ok((corpus, warnings))
}
