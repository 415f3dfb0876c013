//! Deterministic train/validation/test splitting.
//!
//! [`iterative_stratify`] implements greedy multi-label stratification:
//! documents are placed rarest-label-first into the split that most wants
//! that label, which keeps per-label proportions close to the global ratios
//! even for rare labels. [`random_split`] is the baseline it is measured
//! against. Desired counts are kept as integer-scaled fractions so no float
//! drift can flip an assignment between platforms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::math;
use crate::rng::SplitRng;
use crate::taxonomy::ConceptId;

/// Fixed-point scale for desired-count arithmetic: one document = `SCALE`.
const SCALE: i64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SplitError {
    #[error("ratios must sum to 1 (sum was {0})")]
    RatioSum(f64),
    #[error("each ratio must lie strictly between 0 and 1")]
    RatioRange,
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("document `{0}` has no labels")]
    NoLabels(String),
    #[error("split does not cover document `{0}`")]
    MissingDoc(String),
}

/// Train/valid/test fractions, each in (0,1), summing to 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    train: f64,
    valid: f64,
    test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, valid: f64, test: f64) -> Result<Self, SplitError> {
        for r in [train, valid, test] {
            if !(r > 0.0 && r < 1.0) {
                return Err(SplitError::RatioRange);
            }
        }
        let sum = train + valid + test;
        if math::abs(sum - 1.0) > 1e-9 {
            return Err(SplitError::RatioSum(sum));
        }
        Ok(SplitRatios { train, valid, test })
    }

    pub fn train(&self) -> f64 {
        self.train
    }

    pub fn valid(&self) -> f64 {
        self.valid
    }

    pub fn test(&self) -> f64 {
        self.test
    }

    pub fn of(&self, part: Split) -> f64 {
        match part {
            Split::Train => self.train,
            Split::Valid => self.valid,
            Split::Test => self.test,
        }
    }

    /// Integer-scaled ratios; the test share absorbs rounding so the three
    /// components sum to exactly `SCALE`.
    fn scaled(&self) -> [i64; 3] {
        let train = math::round(self.train * SCALE as f64) as i64;
        let valid = math::round(self.valid * SCALE as f64) as i64;
        [train, valid, SCALE - train - valid]
    }
}

/// The three parts of a dataset split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Valid, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }

    pub fn parse(s: &str) -> Option<Split> {
        match s {
            "train" => Some(Split::Train),
            "valid" | "dev" => Some(Split::Valid),
            "test" => Some(Split::Test),
            _ => None,
        }
    }

    fn index(self) -> usize {
        match self {
            Split::Train => 0,
            Split::Valid => 1,
            Split::Test => 2,
        }
    }

    fn from_index(i: usize) -> Split {
        Split::ALL[i]
    }
}

impl core::fmt::Display for Split {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A complete document → split mapping, with the seed and ratios that
/// produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitAssignment {
    assignment: BTreeMap<String, Split>,
    seed: u64,
    ratios: SplitRatios,
}

impl SplitAssignment {
    pub fn new(assignment: BTreeMap<String, Split>, seed: u64, ratios: SplitRatios) -> Self {
        SplitAssignment { assignment, seed, ratios }
    }

    pub fn get(&self, id: &str) -> Option<Split> {
        self.assignment.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Split)> {
        self.assignment.iter().map(|(id, part)| (id.as_str(), *part))
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn ratios(&self) -> SplitRatios {
        self.ratios
    }

    /// Document counts as `[train, valid, test]`.
    pub fn counts(&self) -> [usize; 3] {
        let mut counts = [0usize; 3];
        for part in self.assignment.values() {
            counts[part.index()] += 1;
        }
        counts
    }

    /// Ids belonging to one split part, in sorted order.
    pub fn part_ids(&self, part: Split) -> impl Iterator<Item = &str> {
        self.assignment
            .iter()
            .filter(move |(_, p)| **p == part)
            .map(|(id, _)| id.as_str())
    }
}

/// The documents of one split part as their own corpus.
pub fn corpus_part(
    corpus: &Corpus,
    assignment: &SplitAssignment,
    part: Split,
) -> Result<Corpus, SplitError> {
    let mut docs = Vec::new();
    for doc in corpus.docs() {
        let assigned = assignment
            .get(&doc.id)
            .ok_or_else(|| SplitError::MissingDoc(doc.id.clone()))?;
        if assigned == part {
            docs.push(doc.clone());
        }
    }
    Ok(Corpus::new(docs, corpus.label_level(), corpus.source())
        .expect("documents of a valid corpus stay valid"))
}

fn check_corpus(corpus: &Corpus) -> Result<(), SplitError> {
    if corpus.is_empty() {
        return Err(SplitError::EmptyCorpus);
    }
    for doc in corpus.docs() {
        if doc.labels.is_empty() {
            return Err(SplitError::NoLabels(doc.id.clone()));
        }
    }
    Ok(())
}

/// Greedy iterative stratification.
///
/// Desired per-split document counts and per-label-per-split counts start at
/// `N·r_j` and `freq(l)·r_j`. The label with the fewest unassigned documents
/// is resolved first (ties: smallest label id); each of its documents goes to
/// the split with the largest remaining desire for that label, breaking ties
/// by the largest remaining overall desire, then by a seeded uniform pick.
/// Candidates are limited to splits still below their apportioned size, so
/// every part ends within one document of `⌊N·r⌋`. Deterministic for a fixed
/// (corpus, ratios, seed).
pub fn iterative_stratify(
    corpus: &Corpus,
    ratios: SplitRatios,
    seed: u64,
) -> Result<SplitAssignment, SplitError> {
    check_corpus(corpus)?;
    let docs = corpus.docs();
    let n = docs.len();
    let scaled = ratios.scaled();
    let capacity = part_sizes(n, ratios);
    let mut filled = [0usize; 3];

    let mut desired_split: [i64; 3] = [0; 3];
    for (j, r) in scaled.iter().enumerate() {
        desired_split[j] = n as i64 * r;
    }

    // Per label: the set of unassigned documents (indices, ascending = id
    // order) and the remaining desired counts per split.
    let mut label_docs: BTreeMap<&ConceptId, BTreeSet<usize>> = BTreeMap::new();
    for (idx, doc) in docs.iter().enumerate() {
        for label in &doc.labels {
            label_docs.entry(label).or_default().insert(idx);
        }
    }
    let mut desired_label: BTreeMap<&ConceptId, [i64; 3]> = BTreeMap::new();
    for (label, members) in &label_docs {
        let freq = members.len() as i64;
        let mut desires = [0i64; 3];
        for (j, r) in scaled.iter().enumerate() {
            desires[j] = freq * r;
        }
        desired_label.insert(label, desires);
    }

    let mut rng = SplitRng::new(seed).split("iterative-stratify");
    let mut assigned: Vec<Option<Split>> = alloc::vec![None; n];
    let mut remaining = n;

    while remaining > 0 {
        let mut pick: Option<(usize, ConceptId)> = None;
        for (label, members) in &label_docs {
            if members.is_empty() {
                continue;
            }
            let better = match &pick {
                None => true,
                Some((len, id)) => (members.len(), *label) < (*len, id),
            };
            if better {
                pick = Some((members.len(), (*label).clone()));
            }
        }
        let Some((_, label)) = pick else { break };
        let members = label_docs
            .get(&label)
            .expect("picked label exists")
            .clone();
        for idx in members {
            if assigned[idx].is_some() {
                continue;
            }
            let desires = *desired_label.get(&label).expect("picked label exists");
            let part = pick_split(&desires, &desired_split, &capacity, &filled, &mut rng);
            assigned[idx] = Some(part);
            remaining -= 1;
            let j = part.index();
            filled[j] += 1;
            desired_split[j] -= SCALE;
            for doc_label in &docs[idx].labels {
                if let Some(d) = desired_label.get_mut(doc_label) {
                    d[j] -= SCALE;
                }
                if let Some(bucket) = label_docs.get_mut(doc_label) {
                    bucket.remove(&idx);
                }
            }
        }
    }

    // Unreachable for corpora that passed the label check; kept so a future
    // caller with label-less documents still gets a total assignment.
    for slot in assigned.iter_mut() {
        if slot.is_none() {
            let part = pick_split(&[0, 0, 0], &desired_split, &capacity, &filled, &mut rng);
            *slot = Some(part);
            filled[part.index()] += 1;
            desired_split[part.index()] -= SCALE;
        }
    }

    let assignment: BTreeMap<String, Split> = docs
        .iter()
        .enumerate()
        .map(|(idx, doc)| (doc.id.clone(), assigned[idx].unwrap()))
        .collect();
    Ok(SplitAssignment { assignment, seed, ratios })
}

fn pick_split(
    label_desire: &[i64; 3],
    split_desire: &[i64; 3],
    capacity: &[usize; 3],
    filled: &[usize; 3],
    rng: &mut SplitRng,
) -> Split {
    let open: Vec<usize> = (0..3).filter(|&j| filled[j] < capacity[j]).collect();
    debug_assert!(!open.is_empty(), "capacities sum to the document count");
    let max_label = open.iter().map(|&j| label_desire[j]).max().unwrap();
    let candidates: Vec<usize> = open
        .into_iter()
        .filter(|&j| label_desire[j] == max_label)
        .collect();
    if candidates.len() == 1 {
        return Split::from_index(candidates[0]);
    }
    let max_split = candidates.iter().map(|&j| split_desire[j]).max().unwrap();
    let candidates: Vec<usize> = candidates
        .into_iter()
        .filter(|&j| split_desire[j] == max_split)
        .collect();
    if candidates.len() == 1 {
        return Split::from_index(candidates[0]);
    }
    let pick = rng.next_below(candidates.len() as u64) as usize;
    Split::from_index(candidates[pick])
}

/// Seeded uniform shuffle followed by a contiguous partition. Split sizes
/// come from the largest-remainder method, so each differs from `⌊N·r⌋` by at
/// most one.
pub fn random_split(
    corpus: &Corpus,
    ratios: SplitRatios,
    seed: u64,
) -> Result<SplitAssignment, SplitError> {
    check_corpus(corpus)?;
    let docs = corpus.docs();
    let n = docs.len();
    let sizes = part_sizes(n, ratios);

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = SplitRng::new(seed).split("random-split");
    rng.shuffle(&mut order);

    let mut assignment: BTreeMap<String, Split> = BTreeMap::new();
    let mut cursor = 0usize;
    for (j, &size) in sizes.iter().enumerate() {
        for &idx in &order[cursor..cursor + size] {
            assignment.insert(docs[idx].id.clone(), Split::from_index(j));
        }
        cursor += size;
    }
    Ok(SplitAssignment { assignment, seed, ratios })
}

/// Largest-remainder apportionment of `n` documents over the three splits.
fn part_sizes(n: usize, ratios: SplitRatios) -> [usize; 3] {
    let scaled = ratios.scaled();
    let mut sizes = [0usize; 3];
    let mut remainders: Vec<(i64, usize)> = Vec::with_capacity(3);
    let mut allocated = 0usize;
    for j in 0..3 {
        let target = n as i64 * scaled[j];
        sizes[j] = (target / SCALE) as usize;
        allocated += sizes[j];
        remainders.push((-(target % SCALE), j));
    }
    remainders.sort_unstable();
    for k in 0..(n - allocated) {
        sizes[remainders[k].1] += 1;
    }
    sizes
}

/// Stratification quality: per-label absolute deviation between realized and
/// target split proportions, aggregated over all (label, split) pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratificationReport {
    pub mean_deviation: f64,
    pub max_deviation: f64,
    pub labels_absent_from_train: usize,
}

pub fn deviation_report(
    corpus: &Corpus,
    assignment: &SplitAssignment,
) -> Result<StratificationReport, SplitError> {
    let mut per_label: BTreeMap<&ConceptId, [u64; 3]> = BTreeMap::new();
    for doc in corpus.docs() {
        let part = assignment
            .get(&doc.id)
            .ok_or_else(|| SplitError::MissingDoc(doc.id.clone()))?;
        for label in &doc.labels {
            per_label.entry(label).or_insert([0; 3])[part.index()] += 1;
        }
    }
    let ratios = assignment.ratios();
    let mut sum = 0.0;
    let mut max = 0.0f64;
    let mut cells = 0usize;
    let mut absent = 0usize;
    for counts in per_label.values() {
        let freq: u64 = counts.iter().sum();
        if counts[Split::Train.index()] == 0 {
            absent += 1;
        }
        for part in Split::ALL {
            let p = counts[part.index()] as f64 / freq as f64;
            let dev = math::abs(p - ratios.of(part));
            sum += dev;
            if dev > max {
                max = dev;
            }
            cells += 1;
        }
    }
    Ok(StratificationReport {
        mean_deviation: if cells == 0 { 0.0 } else { sum / cells as f64 },
        max_deviation: max,
        labels_absent_from_train: absent,
    })
}
