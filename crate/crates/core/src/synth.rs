//! Seeded synthetic corpora for benchmarks and end-to-end checks.
//!
//! Both builders are deterministic for a fixed seed, so downstream tests can
//! freeze expectations against them.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{Corpus, CorpusSource, Document, Zones};
use crate::rng::SplitRng;
use crate::taxonomy::{ConceptId, LabelLevel};

fn label_id(l: usize) -> ConceptId {
    ConceptId::eurovoc(&format!("{}", 9_000_000 + l))
}

/// A corpus with a long-tail label distribution: `n_labels` labels weighted
/// `1/rank`, one to four labels per document, and text correlated with the
/// labels plus common filler.
pub fn zipf_corpus(n_docs: usize, n_labels: usize, seed: u64) -> Corpus {
    assert!(n_labels >= 2);
    let mut rng = SplitRng::new(seed).split("synth-zipf");
    let weights: Vec<f64> = (0..n_labels).map(|l| 1.0 / (l + 1) as f64).collect();
    let total: f64 = weights.iter().sum();

    let mut docs: Vec<Document> = Vec::with_capacity(n_docs);
    for d in 0..n_docs {
        let n = 1 + rng.next_below(4) as usize;
        let mut labels: BTreeSet<ConceptId> = BTreeSet::new();
        let mut label_nos: Vec<usize> = Vec::new();
        let mut guard = 0;
        while labels.len() < n && guard < 1000 {
            guard += 1;
            let mut pick = rng.next_f64() * total;
            let mut chosen = n_labels - 1;
            for (l, w) in weights.iter().enumerate() {
                if pick < *w {
                    chosen = l;
                    break;
                }
                pick -= w;
            }
            if labels.insert(label_id(chosen)) {
                label_nos.push(chosen);
            }
        }
        let mut text = String::new();
        for l in &label_nos {
            text.push_str(&format!("term{l} topic{l} "));
        }
        text.push_str("regulation council article");
        let doc = Document::new(
            format!("doc{d:05}"),
            "en",
            Zones::from_pairs([("body", text)]).unwrap(),
            labels,
        )
        .unwrap();
        docs.push(doc);
    }
    Corpus::new(docs, LabelLevel::De, CorpusSource::Synthetic).unwrap()
}

/// A linearly separable corpus: each label owns a keyword that appears in
/// exactly the documents carrying that label, amid shared filler tokens.
pub fn separable_corpus(n_docs: usize, n_labels: usize, seed: u64) -> Corpus {
    assert!(n_labels >= 2);
    let mut rng = SplitRng::new(seed).split("synth-separable");
    let mut docs: Vec<Document> = Vec::with_capacity(n_docs);
    for d in 0..n_docs {
        let n = 1 + rng.next_below(3) as usize;
        let mut labels: BTreeSet<ConceptId> = BTreeSet::new();
        let mut keywords: Vec<usize> = Vec::new();
        while keywords.len() < n {
            let l = rng.next_below(n_labels as u64) as usize;
            if labels.insert(label_id(l)) {
                keywords.push(l);
            }
        }
        let mut text = String::new();
        for l in &keywords {
            text.push_str(&format!("kw{l} kw{l} "));
        }
        text.push_str("whereas the committee has regard to the treaty");
        let doc = Document::new(
            format!("doc{d:05}"),
            "en",
            Zones::from_pairs([("body", text)]).unwrap(),
            labels,
        )
        .unwrap();
        docs.push(doc);
    }
    Corpus::new(docs, LabelLevel::De, CorpusSource::Synthetic).unwrap()
}
