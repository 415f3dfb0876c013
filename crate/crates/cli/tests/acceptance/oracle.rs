//! Brute-force reference implementations used only by the acceptance suite.
//! They recompute every metric from first principles with naive loops and
//! std float functions, independent of the library code paths they check.

use std::collections::{BTreeMap, BTreeSet};

use lmtc_core::rng::SplitRng;
use lmtc_core::taxonomy::ConceptId;

pub fn label(l: u8) -> ConceptId {
    ConceptId::eurovoc(&format!("{}", 100 + l as u32))
}

pub fn doc_id(d: usize) -> String {
    format!("doc{d}")
}

/// One random evaluation instance over a small universe.
#[derive(Clone, Debug)]
pub struct Instance {
    pub gold: Vec<BTreeSet<u8>>,
    pub scores: Vec<Vec<(u8, f64)>>,
}

pub fn random_instance(rng: &mut SplitRng, max_docs: u64, max_labels: u64) -> Instance {
    let n_docs = 1 + rng.next_below(max_docs) as usize;
    let mut gold = Vec::with_capacity(n_docs);
    let mut scores = Vec::with_capacity(n_docs);
    for _ in 0..n_docs {
        let mut gold_set: BTreeSet<u8> = BTreeSet::new();
        for l in 0..max_labels as u8 {
            if rng.next_f64() < 0.4 {
                gold_set.insert(l);
            }
        }
        if gold_set.is_empty() {
            gold_set.insert(rng.next_below(max_labels) as u8);
        }
        let mut row: Vec<(u8, f64)> = Vec::new();
        for l in 0..max_labels as u8 {
            if rng.next_f64() < 0.7 {
                row.push((l, rng.next_f64()));
            }
        }
        gold.push(gold_set);
        scores.push(row);
    }
    Instance { gold, scores }
}

pub fn to_gold(inst: &Instance) -> lmtc_core::metrics::GoldLabels {
    lmtc_core::metrics::GoldLabels::new(
        inst.gold
            .iter()
            .enumerate()
            .map(|(d, set)| (doc_id(d), set.iter().map(|&l| label(l)).collect()))
            .collect(),
    )
    .unwrap()
}

pub fn to_scores(inst: &Instance) -> lmtc_core::metrics::ScoreMatrix {
    lmtc_core::metrics::ScoreMatrix::new(
        inst.scores
            .iter()
            .enumerate()
            .map(|(d, row)| {
                (doc_id(d), row.iter().map(|&(l, s)| (label(l), s)).collect::<Vec<_>>())
            })
            .collect(),
    )
    .unwrap()
}

/// Ranks by repeatedly extracting the pair with the highest score, smallest
/// label IRI on ties.
fn rank(row: &[(u8, f64)]) -> Vec<u8> {
    let mut remaining: Vec<(u8, f64)> = row.to_vec();
    let mut out = Vec::new();
    while !remaining.is_empty() {
        let mut best = 0usize;
        for i in 1..remaining.len() {
            let (bl, bs) = remaining[best];
            let (il, is) = remaining[i];
            if is > bs || (is == bs && label(il) < label(bl)) {
                best = i;
            }
        }
        out.push(remaining.remove(best).0);
    }
    out
}

pub fn rp_at_k(inst: &Instance, k: usize) -> f64 {
    let mut sum = 0.0;
    for (gold, row) in inst.gold.iter().zip(&inst.scores) {
        let ranked = rank(row);
        let mut hits = 0usize;
        for (pos, l) in ranked.iter().enumerate() {
            if pos < k && gold.contains(l) {
                hits += 1;
            }
        }
        sum += hits as f64 / k.min(gold.len()) as f64;
    }
    sum / inst.gold.len() as f64
}

pub fn ndcg_at_k(inst: &Instance, k: usize) -> f64 {
    let mut sum = 0.0;
    for (gold, row) in inst.gold.iter().zip(&inst.scores) {
        let ranked = rank(row);
        let mut dcg = 0.0;
        for (pos, l) in ranked.iter().enumerate().take(k) {
            let rel: f64 = if gold.contains(l) { 1.0 } else { 0.0 };
            dcg += (2f64.powf(rel) - 1.0) / (pos as f64 + 2.0).log2();
        }
        let mut idcg = 0.0;
        for pos in 0..k.min(gold.len()) {
            idcg += 1.0 / (pos as f64 + 2.0).log2();
        }
        sum += dcg / idcg;
    }
    sum / inst.gold.len() as f64
}

/// Pooled micro scores by scanning the whole (doc, label) grid.
pub fn micro(
    pred: &[BTreeSet<u8>],
    gold: &[BTreeSet<u8>],
    universe: u8,
) -> (u64, u64, u64, f64) {
    let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
    for (p, g) in pred.iter().zip(gold) {
        for l in 0..universe {
            match (p.contains(&l), g.contains(&l)) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
    }
    let precision = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let recall = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    (tp, fp, fn_, f1)
}

/// Micro-F1 of thresholded predictions, recomputed from scratch.
pub fn micro_f1_at_threshold(inst: &Instance, t: f64, universe: u8) -> f64 {
    let pred: Vec<BTreeSet<u8>> = inst
        .scores
        .iter()
        .map(|row| row.iter().filter(|(_, s)| *s >= t).map(|(l, _)| *l).collect())
        .collect();
    micro(&pred, &inst.gold, universe).3
}

/// Random per-document prediction sets matching the gold documents.
pub fn random_predictions(
    rng: &mut SplitRng,
    inst: &Instance,
    max_labels: u64,
) -> (Vec<BTreeSet<u8>>, BTreeMap<String, BTreeSet<ConceptId>>) {
    let mut raw = Vec::with_capacity(inst.gold.len());
    let mut typed: BTreeMap<String, BTreeSet<ConceptId>> = BTreeMap::new();
    for d in 0..inst.gold.len() {
        let mut set: BTreeSet<u8> = BTreeSet::new();
        for l in 0..max_labels as u8 {
            if rng.next_f64() < 0.35 {
                set.insert(l);
            }
        }
        typed.insert(doc_id(d), set.iter().map(|&l| label(l)).collect());
        raw.push(set);
    }
    (raw, typed)
}
