//! Evaluation over ranked label scores: pooled Micro-F1 with a
//! validation-set threshold search, R-Precision@K, and nDCG@K.
//!
//! RP@K divides the top-K hit count by `min(K, R_n)`, where `R_n` is the
//! number of gold labels of document `n`, so documents with fewer gold labels
//! than K are not penalized. nDCG@K uses binary gains with a log2 discount
//! and normalizes by the ideal ranking, so a perfect ranking scores exactly 1.
//! Per-document terms are summed in sorted document order, which keeps every
//! metric bit-stable.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::math;
use crate::taxonomy::ConceptId;

/// The Ks reported by default.
pub const DEFAULT_KS: [usize; 4] = [1, 3, 5, 10];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("document sets differ: `{0}` is present on one side only")]
    IdMismatch(String),
    #[error("document `{doc}`: score {score} for `{label}` is outside [0,1]")]
    ScoreOutOfRange { doc: String, label: ConceptId, score: f64 },
    #[error("document `{doc}`: duplicate label `{label}` in score list")]
    DuplicateLabel { doc: String, label: ConceptId },
    #[error("document `{0}`: empty gold label set")]
    EmptyGoldSet(String),
    #[error("no documents to evaluate")]
    NoDocuments,
    #[error("invalid threshold grid: {0}")]
    InvalidGrid(&'static str),
    #[error("K must be at least 1")]
    ZeroK,
}

/// Per-document ranked label scores: sorted by score descending, ties broken
/// by label IRI ascending, each label at most once, scores in `[0,1]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreMatrix {
    rows: BTreeMap<String, Vec<(ConceptId, f64)>>,
}

impl ScoreMatrix {
    /// Validates and sorts the given rows into canonical rank order.
    pub fn new(rows: BTreeMap<String, Vec<(ConceptId, f64)>>) -> Result<Self, MetricsError> {
        let mut sorted_rows = rows;
        for (doc, row) in &mut sorted_rows {
            let mut seen: BTreeSet<&ConceptId> = BTreeSet::new();
            for (label, score) in row.iter() {
                if !(score.is_finite() && (0.0..=1.0).contains(score)) {
                    return Err(MetricsError::ScoreOutOfRange {
                        doc: doc.clone(),
                        label: label.clone(),
                        score: *score,
                    });
                }
                if !seen.insert(label) {
                    return Err(MetricsError::DuplicateLabel {
                        doc: doc.clone(),
                        label: label.clone(),
                    });
                }
            }
            row.sort_by(|(la, sa), (lb, sb)| sb.total_cmp(sa).then_with(|| la.cmp(lb)));
        }
        Ok(ScoreMatrix { rows: sorted_rows })
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &[(ConceptId, f64)])> {
        self.rows.iter().map(|(id, row)| (id.as_str(), row.as_slice()))
    }

    pub fn get(&self, id: &str) -> Option<&[(ConceptId, f64)]> {
        self.rows.get(id).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.rows.keys().map(String::as_str)
    }
}

/// Ground-truth label sets; every document has at least one gold label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldLabels {
    map: BTreeMap<String, BTreeSet<ConceptId>>,
}

impl GoldLabels {
    pub fn new(map: BTreeMap<String, BTreeSet<ConceptId>>) -> Result<Self, MetricsError> {
        if map.is_empty() {
            return Err(MetricsError::NoDocuments);
        }
        for (doc, labels) in &map {
            if labels.is_empty() {
                return Err(MetricsError::EmptyGoldSet(doc.clone()));
            }
        }
        Ok(GoldLabels { map })
    }

    pub fn from_corpus(corpus: &Corpus) -> Result<Self, MetricsError> {
        GoldLabels::new(
            corpus
                .docs()
                .iter()
                .map(|d| (d.id.clone(), d.labels.clone()))
                .collect(),
        )
    }

    pub fn get(&self, id: &str) -> Option<&BTreeSet<ConceptId>> {
        self.map.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<ConceptId>)> {
        self.map.iter().map(|(id, labels)| (id.as_str(), labels))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        // Always false: construction rejects empty maps.
        self.map.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }
}

/// Pooled decision counts over all (document, label) pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MicroCounts {
    #[serde(rename = "tp")]
    pub true_positives: u64,
    #[serde(rename = "fp")]
    pub false_positives: u64,
    #[serde(rename = "fn")]
    pub false_negatives: u64,
}

impl MicroCounts {
    pub fn precision(&self) -> f64 {
        let denom = self.true_positives + self.false_positives;
        if denom == 0 {
            0.0
        } else {
            self.true_positives as f64 / denom as f64
        }
    }

    pub fn recall(&self) -> f64 {
        let denom = self.true_positives + self.false_negatives;
        if denom == 0 {
            0.0
        } else {
            self.true_positives as f64 / denom as f64
        }
    }

    /// Harmonic mean of precision and recall; 0 when both are 0.
    pub fn f1(&self) -> f64 {
        let p = self.precision();
        let r = self.recall();
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

fn check_same_docs(
    pred: &BTreeMap<String, BTreeSet<ConceptId>>,
    gold: &GoldLabels,
) -> Result<(), MetricsError> {
    let mut a = pred.keys();
    let mut b = gold.map.keys();
    loop {
        match (a.next(), b.next()) {
            (None, None) => return Ok(()),
            (Some(x), Some(y)) if x == y => {}
            (Some(x), Some(y)) => {
                let odd = if x < y { x } else { y };
                return Err(MetricsError::IdMismatch(odd.clone()));
            }
            (Some(x), None) => return Err(MetricsError::IdMismatch(x.clone())),
            (None, Some(y)) => return Err(MetricsError::IdMismatch(y.clone())),
        }
    }
}

/// Scores may cover a subset of gold documents (missing rows count as empty
/// rankings) but never a document outside gold.
fn check_scores_within_gold(scores: &ScoreMatrix, gold: &GoldLabels) -> Result<(), MetricsError> {
    for id in scores.rows.keys() {
        if !gold.map.contains_key(id) {
            return Err(MetricsError::IdMismatch(id.clone()));
        }
    }
    Ok(())
}

/// Pooled TP/FP/FN between per-document prediction sets and gold sets.
/// Labels predicted outside the gold vocabulary still count as FP.
pub fn micro_counts(
    pred: &BTreeMap<String, BTreeSet<ConceptId>>,
    gold: &GoldLabels,
) -> Result<MicroCounts, MetricsError> {
    check_same_docs(pred, gold)?;
    let mut counts = MicroCounts::default();
    for (doc, predicted) in pred {
        let gold_set = &gold.map[doc];
        let tp = predicted.intersection(gold_set).count() as u64;
        counts.true_positives += tp;
        counts.false_positives += predicted.len() as u64 - tp;
        counts.false_negatives += gold_set.len() as u64 - tp;
    }
    Ok(counts)
}

/// Micro-averaged F1 over the pooled prediction vector.
pub fn micro_f1(
    pred: &BTreeMap<String, BTreeSet<ConceptId>>,
    gold: &GoldLabels,
) -> Result<f64, MetricsError> {
    micro_counts(pred, gold).map(|c| c.f1())
}

/// R-Precision@K: mean over documents of (hits in top K) / min(K, R_n).
pub fn rp_at_k(scores: &ScoreMatrix, gold: &GoldLabels, k: usize) -> Result<f64, MetricsError> {
    if k == 0 {
        return Err(MetricsError::ZeroK);
    }
    check_scores_within_gold(scores, gold)?;
    let mut sum = 0.0;
    for (doc, gold_set) in &gold.map {
        let ranked = scores.get(doc).unwrap_or(&[]);
        let hits = ranked
            .iter()
            .take(k)
            .filter(|(label, _)| gold_set.contains(label))
            .count();
        sum += hits as f64 / k.min(gold_set.len()) as f64;
    }
    Ok(sum / gold.map.len() as f64)
}

/// nDCG@K with binary gains: mean over documents of DCG@K / IDCG@K, where
/// IDCG places one relevant label at each of the first min(K, R_n) ranks.
pub fn ndcg_at_k(scores: &ScoreMatrix, gold: &GoldLabels, k: usize) -> Result<f64, MetricsError> {
    if k == 0 {
        return Err(MetricsError::ZeroK);
    }
    check_scores_within_gold(scores, gold)?;
    let mut sum = 0.0;
    for (doc, gold_set) in &gold.map {
        let ranked = scores.get(doc).unwrap_or(&[]);
        let mut dcg = 0.0;
        for (rank, (label, _)) in ranked.iter().take(k).enumerate() {
            if gold_set.contains(label) {
                dcg += 1.0 / math::log2((rank + 2) as f64);
            }
        }
        let ideal_len = k.min(gold_set.len());
        let mut idcg = 0.0;
        for rank in 0..ideal_len {
            idcg += 1.0 / math::log2((rank + 2) as f64);
        }
        sum += dcg / idcg;
    }
    Ok(sum / gold.map.len() as f64)
}

/// An evenly spaced threshold grid over `[start, stop]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl ThresholdGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, MetricsError> {
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
            return Err(MetricsError::InvalidGrid("bounds must lie in [0,1]"));
        }
        if start >= stop {
            return Err(MetricsError::InvalidGrid("start must be below stop"));
        }
        if !step.is_finite() || step <= 0.0 {
            return Err(MetricsError::InvalidGrid("step must be positive"));
        }
        Ok(ThresholdGrid { start, stop, step })
    }

    /// Thresholds 0.00..=1.00 in steps of 0.01.
    pub fn default_grid() -> Self {
        ThresholdGrid { start: 0.0, stop: 1.0, step: 0.01 }
    }

    /// Grid points `start + i·step`, computed by multiplication so long
    /// grids do not accumulate addition error.
    pub fn values(&self) -> Vec<f64> {
        let count = math::floor((self.stop - self.start) / self.step + 1e-9) as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// Outcome of the validation-set threshold search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearchResult {
    pub best_threshold: f64,
    pub best_micro_f1: f64,
    pub curve: Vec<(f64, f64)>,
}

/// Predicted label sets at threshold `t`: labels scoring `>= t` (inclusive).
fn predictions_at(
    scores: &ScoreMatrix,
    gold: &GoldLabels,
    t: f64,
) -> BTreeMap<String, BTreeSet<ConceptId>> {
    let mut pred: BTreeMap<String, BTreeSet<ConceptId>> = BTreeMap::new();
    for doc in gold.map.keys() {
        let row = scores.get(doc).unwrap_or(&[]);
        let set: BTreeSet<ConceptId> = row
            .iter()
            .filter(|(_, score)| *score >= t)
            .map(|(label, _)| label.clone())
            .collect();
        pred.insert(doc.clone(), set);
    }
    pred
}

/// Sweeps the grid, evaluating Micro-F1 of the thresholded predictions, and
/// returns the smallest threshold that attains the maximum.
pub fn threshold_grid_search(
    scores: &ScoreMatrix,
    gold: &GoldLabels,
    grid: &ThresholdGrid,
) -> Result<ThresholdSearchResult, MetricsError> {
    check_scores_within_gold(scores, gold)?;
    let mut curve: Vec<(f64, f64)> = Vec::new();
    let mut best_threshold = grid.start;
    let mut best_micro_f1 = -1.0;
    for t in grid.values() {
        let pred = predictions_at(scores, gold, t);
        let f1 = micro_f1(&pred, gold)?;
        curve.push((t, f1));
        if f1 > best_micro_f1 {
            best_micro_f1 = f1;
            best_threshold = t;
        }
    }
    Ok(ThresholdSearchResult { best_threshold, best_micro_f1, curve })
}

/// The full evaluation: Micro-F1 and global counts at the chosen threshold,
/// plus RP@K and nDCG@K per requested K.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub micro_f1: f64,
    pub precision: f64,
    pub recall: f64,
    #[serde(flatten)]
    pub counts: MicroCounts,
    pub threshold: f64,
    pub rp: BTreeMap<usize, f64>,
    pub ndcg: BTreeMap<usize, f64>,
}

/// Chooses the threshold on the validation scores, then evaluates everything
/// on the test scores.
pub fn full_report(
    scores_valid: &ScoreMatrix,
    gold_valid: &GoldLabels,
    scores_test: &ScoreMatrix,
    gold_test: &GoldLabels,
    ks: &[usize],
    grid: &ThresholdGrid,
) -> Result<MetricsReport, MetricsError> {
    let search = threshold_grid_search(scores_valid, gold_valid, grid)?;
    check_scores_within_gold(scores_test, gold_test)?;
    let pred = predictions_at(scores_test, gold_test, search.best_threshold);
    let counts = micro_counts(&pred, gold_test)?;
    let mut rp = BTreeMap::new();
    let mut ndcg = BTreeMap::new();
    for &k in ks {
        rp.insert(k, rp_at_k(scores_test, gold_test, k)?);
        ndcg.insert(k, ndcg_at_k(scores_test, gold_test, k)?);
    }
    Ok(MetricsReport {
        micro_f1: counts.f1(),
        precision: counts.precision(),
        recall: counts.recall(),
        counts,
        threshold: search.best_threshold,
        rp,
        ndcg,
    })
}
