//! The canonical labeled-corpus model and its statistics.
//!
//! A [`Document`] is zoned text (e.g. body/signature/annex for JRC-Acquis,
//! header/recitals/main_body/attachments for EURLEX57K) plus a non-empty set
//! of EuroVoc labels. A [`Corpus`] keeps its documents sorted by id so every
//! seeded algorithm downstream is reproducible regardless of ingestion order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::math;
use crate::split::{Split, SplitAssignment};
use crate::taxonomy::{ConceptId, LabelLevel, ReductionMode, TaxonomyError, Thesaurus};

/// A label is "frequent" when it occurs on more than this many training
/// documents; at 1..=50 it is few-shot.
pub const FREQUENT_TRAIN_DOCS: u64 = 50;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("corpus is empty")]
    Empty,
    #[error("document id is empty")]
    EmptyDocId,
    #[error("document `{0}`: label set is empty")]
    NoLabels(String),
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),
    #[error("duplicate zone `{0}`")]
    DuplicateZone(String),
    #[error("split does not cover document `{0}`")]
    SplitMissingDoc(String),
}

/// Ordered zone-name → text map. Zone order is part of a document's identity:
/// `full_text` joins the texts in this order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Zones {
    entries: Vec<(String, String)>,
}

impl Zones {
    pub fn new() -> Self {
        Zones::default()
    }

    pub fn from_pairs<I, N, T>(pairs: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = (N, T)>,
        N: Into<String>,
        T: Into<String>,
    {
        let mut zones = Zones::new();
        for (name, text) in pairs {
            zones.insert(name.into(), text.into())?;
        }
        Ok(zones)
    }

    pub fn insert(&mut self, name: String, text: String) -> Result<(), CorpusError> {
        if self.entries.iter().any(|(n, _)| n == &name) {
            return Err(CorpusError::DuplicateZone(name));
        }
        self.entries.push((name, text));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t.as_str())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t.as_str()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Serialize for Zones {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (name, text) in &self.entries {
            map.serialize_entry(name, text)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Zones {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ZonesVisitor;

        impl<'de> Visitor<'de> for ZonesVisitor {
            type Value = Zones;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map of zone name to text")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Zones, A::Error> {
                let mut zones = Zones::new();
                while let Some((name, text)) = access.next_entry::<String, String>()? {
                    zones
                        .insert(name, text)
                        .map_err(|e| serde::de::Error::custom(e.to_string()))?;
                }
                Ok(zones)
            }
        }

        deserializer.deserialize_map(ZonesVisitor)
    }
}

/// One labeled legal document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub language: String,
    pub zones: Zones,
    pub labels: BTreeSet<ConceptId>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        language: impl Into<String>,
        zones: Zones,
        labels: BTreeSet<ConceptId>,
    ) -> Result<Self, CorpusError> {
        let doc = Document { id: id.into(), language: language.into(), zones, labels };
        doc.check()?;
        Ok(doc)
    }

    /// Re-validates the invariants, e.g. after deserialization.
    pub fn check(&self) -> Result<(), CorpusError> {
        if self.id.is_empty() {
            return Err(CorpusError::EmptyDocId);
        }
        if self.labels.is_empty() {
            return Err(CorpusError::NoLabels(self.id.clone()));
        }
        Ok(())
    }

    /// Zone texts joined in zone order with single newlines.
    pub fn full_text(&self) -> String {
        let mut out = String::new();
        for (i, (_, text)) in self.zones.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(text);
        }
        out
    }

    /// Whitespace-token count of [`Document::full_text`].
    pub fn token_count(&self) -> u64 {
        self.full_text().split_whitespace().count() as u64
    }
}

/// Which dataset a corpus came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorpusSource {
    #[serde(rename = "JRC")]
    Jrc,
    #[serde(rename = "EURLEX57K")]
    Eurlex57k,
    Synthetic,
}

impl CorpusSource {
    pub fn as_str(self) -> &'static str {
        match self {
            CorpusSource::Jrc => "JRC",
            CorpusSource::Eurlex57k => "EURLEX57K",
            CorpusSource::Synthetic => "Synthetic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "JRC" => Some(CorpusSource::Jrc),
            "EURLEX57K" => Some(CorpusSource::Eurlex57k),
            "Synthetic" => Some(CorpusSource::Synthetic),
            _ => None,
        }
    }
}

/// A collection of documents at one label level, sorted by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    docs: Vec<Document>,
    label_level: LabelLevel,
    source: CorpusSource,
}

impl Corpus {
    pub fn new(
        mut docs: Vec<Document>,
        label_level: LabelLevel,
        source: CorpusSource,
    ) -> Result<Self, CorpusError> {
        for doc in &docs {
            doc.check()?;
        }
        docs.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in docs.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(CorpusError::DuplicateId(pair[0].id.clone()));
            }
        }
        Ok(Corpus { docs, label_level, source })
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.docs
            .binary_search_by(|d| d.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.docs[i])
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn label_level(&self) -> LabelLevel {
        self.label_level
    }

    pub fn source(&self) -> CorpusSource {
        self.source
    }

    /// Statistics over per-document whitespace-token counts.
    pub fn token_stats(&self) -> Result<TokenStats, CorpusError> {
        if self.docs.is_empty() {
            return Err(CorpusError::Empty);
        }
        let counts: Vec<u64> = self.docs.iter().map(Document::token_count).collect();
        let s = summarize(&counts);
        Ok(TokenStats {
            n_docs: self.docs.len(),
            max: s.max,
            min: s.min,
            mean: s.mean,
            stddev: s.stddev,
            median: s.median,
            mode: s.mode,
        })
    }

    /// Statistics over per-document label-set sizes.
    pub fn label_stats(&self) -> Result<LabelStats, CorpusError> {
        if self.docs.is_empty() {
            return Err(CorpusError::Empty);
        }
        let counts: Vec<u64> = self.docs.iter().map(|d| d.labels.len() as u64).collect();
        let distinct: BTreeSet<&ConceptId> = self.docs.iter().flat_map(|d| d.labels.iter()).collect();
        let s = summarize(&counts);
        Ok(LabelStats {
            max: s.max,
            min: s.min,
            mean: s.mean,
            stddev: s.stddev,
            median: s.median,
            mode: s.mode,
            n_distinct_labels: distinct.len(),
        })
    }

    /// How often each label occurs across the corpus.
    pub fn label_frequencies(&self) -> BTreeMap<ConceptId, u64> {
        let mut freq: BTreeMap<ConceptId, u64> = BTreeMap::new();
        for doc in &self.docs {
            for label in &doc.labels {
                *freq.entry(label.clone()).or_insert(0) += 1;
            }
        }
        freq
    }

    /// Frequent / few-shot / zero-shot bands from train-split frequencies and
    /// test-split presence.
    pub fn frequency_bands(&self, split: &SplitAssignment) -> Result<FrequencyBands, CorpusError> {
        let mut train_freq: BTreeMap<&ConceptId, u64> = BTreeMap::new();
        let mut test_labels: BTreeSet<&ConceptId> = BTreeSet::new();
        for doc in &self.docs {
            let part = split
                .get(&doc.id)
                .ok_or_else(|| CorpusError::SplitMissingDoc(doc.id.clone()))?;
            match part {
                Split::Train => {
                    for label in &doc.labels {
                        *train_freq.entry(label).or_insert(0) += 1;
                    }
                }
                Split::Test => {
                    test_labels.extend(doc.labels.iter());
                }
                Split::Valid => {}
            }
        }
        let mut bands = FrequencyBands::default();
        for (label, freq) in &train_freq {
            if *freq > FREQUENT_TRAIN_DOCS {
                bands.frequent.insert((*label).clone());
            } else {
                bands.few_shot.insert((*label).clone());
            }
        }
        for label in test_labels {
            if !train_freq.contains_key(label) {
                bands.zero_shot.insert(label.clone());
            }
        }
        Ok(bands)
    }
}

/// Token-count statistics per document.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TokenStats {
    pub n_docs: usize,
    pub max: u64,
    pub min: u64,
    pub mean: f64,
    pub stddev: f64,
    pub median: f64,
    pub mode: u64,
}

/// Labels-per-document statistics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelStats {
    pub max: u64,
    pub min: u64,
    pub mean: f64,
    pub stddev: f64,
    pub median: f64,
    pub mode: u64,
    pub n_distinct_labels: usize,
}

/// Label-frequency bands over a split corpus. The three sets are pairwise
/// disjoint; `frequent ∪ few_shot` is exactly the labels occurring in train.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyBands {
    pub frequent: BTreeSet<ConceptId>,
    pub few_shot: BTreeSet<ConceptId>,
    pub zero_shot: BTreeSet<ConceptId>,
}

struct Summary {
    max: u64,
    min: u64,
    mean: f64,
    stddev: f64,
    median: f64,
    mode: u64,
}

/// Population statistics; mode ties resolve to the smallest value.
fn summarize(values: &[u64]) -> Summary {
    let n = values.len();
    debug_assert!(n > 0);
    let mut sorted: Vec<u64> = values.to_vec();
    sorted.sort_unstable();
    let min = sorted[0];
    let max = sorted[n - 1];
    let mean = sorted.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
    let var = sorted
        .iter()
        .map(|&v| {
            let d = v as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / n as f64;
    let stddev = math::sqrt(var);
    let median = if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    };
    let mut mode = sorted[0];
    let mut best_run = 0usize;
    let mut i = 0usize;
    while i < n {
        let mut j = i;
        while j < n && sorted[j] == sorted[i] {
            j += 1;
        }
        if j - i > best_run {
            best_run = j - i;
            mode = sorted[i];
        }
        i = j;
    }
    Summary { max, min, mean, stddev, median, mode }
}

/// Document-id overlap between two corpora, by normalized id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub shared_ids: BTreeSet<String>,
    pub fraction_of_a: f64,
    pub fraction_of_b: f64,
}

/// Uppercases, trims, and strips a known file extension, so the same CELEX
/// document matches across datasets that name it differently.
pub fn normalize_doc_id(id: &str) -> String {
    let trimmed = id.trim();
    let stripped = ["xml", "json", "txt", "html"]
        .iter()
        .find_map(|ext| {
            let n = ext.len() + 1;
            if trimmed.len() > n && trimmed[trimmed.len() - n..].eq_ignore_ascii_case(&alloc::format!(".{ext}")) {
                Some(&trimmed[..trimmed.len() - n])
            } else {
                None
            }
        })
        .unwrap_or(trimmed);
    stripped.to_uppercase()
}

pub fn overlap_report(a: &Corpus, b: &Corpus) -> OverlapReport {
    let ids_a: BTreeSet<String> = a.docs().iter().map(|d| normalize_doc_id(&d.id)).collect();
    let ids_b: BTreeSet<String> = b.docs().iter().map(|d| normalize_doc_id(&d.id)).collect();
    let shared_ids: BTreeSet<String> = ids_a.intersection(&ids_b).cloned().collect();
    let frac = |n: usize| if n == 0 { 0.0 } else { shared_ids.len() as f64 / n as f64 };
    OverlapReport { fraction_of_a: frac(a.len()), fraction_of_b: frac(b.len()), shared_ids }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("document `{doc}`: {source}")]
    Label { doc: String, source: TaxonomyError },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// What a lossy reduction had to drop.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReduceDrops {
    /// (document id, unresolvable label)
    pub labels: Vec<(String, ConceptId)>,
    /// Documents whose entire label set was unresolvable.
    pub docs: Vec<String>,
}

impl ReduceDrops {
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty() && self.docs.is_empty()
    }
}

/// Replaces every document's labels with their reduction at `level`.
/// Any unresolvable label is a hard error.
pub fn reduce_corpus(
    th: &Thesaurus,
    corpus: &Corpus,
    level: LabelLevel,
    mode: ReductionMode,
) -> Result<Corpus, ReduceError> {
    let mut docs = Vec::with_capacity(corpus.len());
    for doc in corpus.docs() {
        let labels = th
            .reduce_labels(&doc.labels, level, mode)
            .map_err(|source| ReduceError::Label { doc: doc.id.clone(), source })?;
        let mut reduced = doc.clone();
        reduced.labels = labels;
        docs.push(reduced);
    }
    Ok(Corpus::new(docs, level, corpus.source())?)
}

/// Like [`reduce_corpus`] but drops unresolvable labels (and documents left
/// without labels) instead of failing, reporting everything dropped.
pub fn reduce_corpus_lossy(
    th: &Thesaurus,
    corpus: &Corpus,
    level: LabelLevel,
    mode: ReductionMode,
) -> Result<(Corpus, ReduceDrops), ReduceError> {
    let mut docs = Vec::with_capacity(corpus.len());
    let mut drops = ReduceDrops::default();
    for doc in corpus.docs() {
        let (labels, dropped) = th.reduce_labels_lossy(&doc.labels, level, mode);
        for label in dropped {
            drops.labels.push((doc.id.clone(), label));
        }
        if labels.is_empty() {
            drops.docs.push(doc.id.clone());
            continue;
        }
        let mut reduced = doc.clone();
        reduced.labels = labels;
        docs.push(reduced);
    }
    Ok((Corpus::new(docs, level, corpus.source())?, drops))
}
