//! A desk-scale bag-of-words classifier with manual gradients.
//!
//! The model is TF-IDF features into one rectified hidden layer into
//! per-label sigmoids, trained with mini-batch gradient descent on sigmoid
//! cross-entropy. Its two parameter groups stand in for the layer groups of a
//! large network, so gradual unfreezing, discriminative per-group learning
//! rates, and the slanted triangular schedule are exercised end to end with
//! exact, checkable numerics. Everything is deterministic for a fixed seed.

mod schedule;

pub use schedule::{
    emit_unfreeze_schedule, stlr_lr, DiscriminativeLrPolicy, ModelKind, StlrConfig,
    UnfreezeCycle, UnfreezeSchedule, UnfrozenGroups,
};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document};
use crate::math;
use crate::metrics::ScoreMatrix;
use crate::rng::SplitRng;
use crate::taxonomy::ConceptId;

/// The model has two parameter groups: the input layer and the classifier
/// head.
pub const N_GROUPS: u32 = 2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrainerError {
    #[error("vocabulary cap must be at least 1")]
    ZeroCap,
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("step {step} outside schedule of {total} steps")]
    StepOutOfRange { step: u32, total: u32 },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(&'static str),
    #[error("invalid config: {0}")]
    InvalidConfig(&'static str),
    #[error("unknown schedule kind `{0}`")]
    UnknownKind(String),
    #[error("training diverged at cycle {cycle}, epoch {epoch} (loss {loss})")]
    Diverged { cycle: u32, epoch: u32, loss: f64 },
    #[error("model shapes are inconsistent with its vocabulary or label space")]
    ShapeMismatch,
    #[error("duplicate document id `{0}` in prediction input")]
    DuplicateDocId(String),
}

/// Lowercase alphanumeric tokens of `text`. Any non-alphanumeric character is
/// a boundary.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() {
            for lower in c.to_lowercase() {
                current.push(lower);
            }
        } else if !current.is_empty() {
            tokens.push(core::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// A capped token inventory ordered by document frequency (descending), ties
/// broken lexicographically. Indices are dense in `[0, len)`. Persist it as
/// its parts (tokens, document frequencies, corpus size) and rebuild with
/// [`Vocabulary::from_parts`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    doc_freq: Vec<u32>,
    n_docs: u32,
    index: BTreeMap<String, u32>,
}

impl Vocabulary {
    pub fn from_parts(tokens: Vec<String>, doc_freq: Vec<u32>, n_docs: u32) -> Result<Self, TrainerError> {
        if tokens.len() != doc_freq.len() {
            return Err(TrainerError::ShapeMismatch);
        }
        let index: BTreeMap<String, u32> =
            tokens.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        if index.len() != tokens.len() {
            return Err(TrainerError::ShapeMismatch);
        }
        Ok(Vocabulary { tokens, doc_freq, n_docs, index })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, idx: u32) -> Option<&str> {
        self.tokens.get(idx as usize).map(String::as_str)
    }

    pub fn index_of(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn doc_freqs(&self) -> &[u32] {
        &self.doc_freq
    }

    pub fn n_docs(&self) -> u32 {
        self.n_docs
    }

    /// Smoothed inverse document frequency of token `idx`.
    fn idf(&self, idx: u32) -> f64 {
        let df = self.doc_freq[idx as usize] as f64;
        math::ln((1.0 + self.n_docs as f64) / (1.0 + df)) + 1.0
    }
}

/// Builds the vocabulary from the training corpus: the `cap` highest
/// document-frequency tokens, ties resolved lexicographically.
pub fn build_vocab(corpus: &Corpus, cap: usize) -> Result<Vocabulary, TrainerError> {
    if cap == 0 {
        return Err(TrainerError::ZeroCap);
    }
    if corpus.is_empty() {
        return Err(TrainerError::EmptyCorpus);
    }
    let mut df: BTreeMap<String, u32> = BTreeMap::new();
    for doc in corpus.docs() {
        let unique: BTreeSet<String> = tokenize(&doc.full_text()).into_iter().collect();
        for token in unique {
            *df.entry(token).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(String, u32)> = df.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(cap);
    let (tokens, doc_freq): (Vec<String>, Vec<u32>) = ranked.into_iter().unzip();
    Vocabulary::from_parts(tokens, doc_freq, corpus.len() as u32)
}

/// A sparse feature vector with ascending indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseVector {
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }
}

/// TF-IDF features for `text`: `tf · (ln((1+N)/(1+df)) + 1)`, L2-normalized.
/// Unknown tokens are dropped; an empty document is the zero vector.
pub fn featurize_text(vocab: &Vocabulary, text: &str) -> SparseVector {
    let mut tf: BTreeMap<u32, f64> = BTreeMap::new();
    for token in tokenize(text) {
        if let Some(idx) = vocab.index_of(&token) {
            *tf.entry(idx).or_insert(0.0) += 1.0;
        }
    }
    let mut indices = Vec::with_capacity(tf.len());
    let mut values = Vec::with_capacity(tf.len());
    let mut norm_sq = 0.0;
    for (idx, count) in tf {
        let w = count * vocab.idf(idx);
        norm_sq += w * w;
        indices.push(idx);
        values.push(w);
    }
    if norm_sq > 0.0 {
        let norm = math::sqrt(norm_sq);
        for v in &mut values {
            *v /= norm;
        }
    }
    SparseVector { indices, values }
}

pub fn featurize(vocab: &Vocabulary, doc: &Document) -> SparseVector {
    featurize_text(vocab, &doc.full_text())
}

/// Numerically stable sigmoid.
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + math::exp(-z))
    } else {
        let e = math::exp(z);
        e / (1.0 + e)
    }
}

/// Stable sigmoid cross-entropy from a logit: max(z,0) − z·y + ln(1+e^−|z|).
fn bce_from_logit(z: f64, y: f64) -> f64 {
    let max_part = if z > 0.0 { z } else { 0.0 };
    max_part - z * y + math::ln(1.0 + math::exp(-math::abs(z)))
}

/// The two-layer bag-of-words model. Group 1 is `(w1, b1)`, group 2 is
/// `(w2, b2)`; `w1` is `[n_features × hidden]` row-major, `w2` is
/// `[hidden × n_labels]` row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct BowModel {
    pub vocab: Vocabulary,
    pub labels: Vec<ConceptId>,
    pub hidden: usize,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl BowModel {
    /// Seeded initialization: weights uniform in ±1/√fan_in, biases zero.
    pub fn init(vocab: Vocabulary, labels: Vec<ConceptId>, hidden: usize, rng: &mut SplitRng) -> Self {
        let n_features = vocab.len();
        let n_labels = labels.len();
        let mut w1 = vec![0.0; n_features * hidden];
        let mut w2 = vec![0.0; hidden * n_labels];
        let bound1 = 1.0 / math::sqrt(n_features.max(1) as f64);
        for w in &mut w1 {
            *w = (rng.next_f64() * 2.0 - 1.0) * bound1;
        }
        let bound2 = 1.0 / math::sqrt(hidden.max(1) as f64);
        for w in &mut w2 {
            *w = (rng.next_f64() * 2.0 - 1.0) * bound2;
        }
        BowModel {
            vocab,
            labels,
            hidden,
            w1,
            b1: vec![0.0; hidden],
            w2,
            b2: vec![0.0; n_labels],
        }
    }

    pub fn n_features(&self) -> usize {
        self.vocab.len()
    }

    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn check_shapes(&self) -> Result<(), TrainerError> {
        let ok = self.w1.len() == self.n_features() * self.hidden
            && self.b1.len() == self.hidden
            && self.w2.len() == self.hidden * self.n_labels()
            && self.b2.len() == self.n_labels();
        if ok {
            Ok(())
        } else {
            Err(TrainerError::ShapeMismatch)
        }
    }

    pub fn all_finite(&self) -> bool {
        self.w1.iter().chain(&self.b1).chain(&self.w2).chain(&self.b2).all(|v| v.is_finite())
    }

    /// Pre-activation hidden values for a sparse input.
    fn hidden_pre(&self, x: &SparseVector) -> Vec<f64> {
        let mut h = self.b1.clone();
        for (i, v) in x.iter() {
            let row = &self.w1[i as usize * self.hidden..(i as usize + 1) * self.hidden];
            for (j, w) in row.iter().enumerate() {
                h[j] += v * w;
            }
        }
        h
    }

    fn logits_from_hidden(&self, h: &[f64]) -> Vec<f64> {
        let n_labels = self.n_labels();
        let mut z = self.b2.clone();
        for (j, &hj) in h.iter().enumerate() {
            if hj == 0.0 {
                continue;
            }
            let row = &self.w2[j * n_labels..(j + 1) * n_labels];
            for (k, w) in row.iter().enumerate() {
                z[k] += hj * w;
            }
        }
        z
    }

    pub fn logits(&self, x: &SparseVector) -> Vec<f64> {
        let mut h = self.hidden_pre(x);
        for v in &mut h {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        self.logits_from_hidden(&h)
    }

    /// Per-label probabilities for a sparse input.
    pub fn forward(&self, x: &SparseVector) -> Vec<f64> {
        self.logits(x).into_iter().map(sigmoid).collect()
    }
}

/// Gradients with the same shapes as the model parameters.
#[derive(Clone, Debug)]
pub struct Gradients {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

/// Mean over the batch of the per-document label-summed sigmoid
/// cross-entropy. `targets` are sorted label indices per document.
pub fn batch_loss(model: &BowModel, xs: &[&SparseVector], targets: &[&[u32]]) -> f64 {
    debug_assert_eq!(xs.len(), targets.len());
    let mut total = 0.0;
    for (x, target) in xs.iter().zip(targets) {
        let logits = model.logits(x);
        let mut cursor = target.iter().peekable();
        for (k, &z) in logits.iter().enumerate() {
            let y = if cursor.peek() == Some(&&(k as u32)) {
                cursor.next();
                1.0
            } else {
                0.0
            };
            total += bce_from_logit(z, y);
        }
    }
    total / xs.len().max(1) as f64
}

/// Loss plus analytic gradients for one mini batch.
pub fn batch_loss_and_grads(
    model: &BowModel,
    xs: &[&SparseVector],
    targets: &[&[u32]],
) -> (f64, Gradients) {
    debug_assert_eq!(xs.len(), targets.len());
    let hidden = model.hidden;
    let n_labels = model.n_labels();
    let mut grads = Gradients {
        w1: vec![0.0; model.w1.len()],
        b1: vec![0.0; hidden],
        w2: vec![0.0; model.w2.len()],
        b2: vec![0.0; n_labels],
    };
    let batch = xs.len().max(1) as f64;
    let inv_batch = 1.0 / batch;
    let mut total = 0.0;

    for (x, target) in xs.iter().zip(targets) {
        let h_pre = model.hidden_pre(x);
        let h: Vec<f64> = h_pre.iter().map(|&v| if v > 0.0 { v } else { 0.0 }).collect();
        let logits = model.logits_from_hidden(&h);

        // d_out = sigmoid(z) − y, scaled by 1/batch.
        let mut d_out = vec![0.0; n_labels];
        let mut cursor = target.iter().peekable();
        for (k, &z) in logits.iter().enumerate() {
            let y = if cursor.peek() == Some(&&(k as u32)) {
                cursor.next();
                1.0
            } else {
                0.0
            };
            total += bce_from_logit(z, y);
            d_out[k] = (sigmoid(z) - y) * inv_batch;
        }

        for (k, &d) in d_out.iter().enumerate() {
            grads.b2[k] += d;
        }
        let mut d_hidden = vec![0.0; hidden];
        for (j, &hj) in h.iter().enumerate() {
            let row = &model.w2[j * n_labels..(j + 1) * n_labels];
            let grad_row = &mut grads.w2[j * n_labels..(j + 1) * n_labels];
            let mut acc = 0.0;
            for (k, &d) in d_out.iter().enumerate() {
                grad_row[k] += hj * d;
                acc += row[k] * d;
            }
            // Rectifier gate: gradient flows only where the unit fired.
            d_hidden[j] = if h_pre[j] > 0.0 { acc } else { 0.0 };
        }
        for (j, &d) in d_hidden.iter().enumerate() {
            grads.b1[j] += d;
        }
        for (i, v) in x.iter() {
            let grad_row = &mut grads.w1[i as usize * hidden..(i as usize + 1) * hidden];
            for (j, &d) in d_hidden.iter().enumerate() {
                grad_row[j] += v * d;
            }
        }
    }
    (total * inv_batch, grads)
}

/// Shape of the per-cycle slanted triangular schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StlrShape {
    pub cut_frac: f64,
    pub ratio: f64,
}

impl Default for StlrShape {
    fn default() -> Self {
        StlrShape { cut_frac: 0.1, ratio: 32.0 }
    }
}

/// Everything the trainer needs besides the corpora.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden: usize,
    pub batch_size: usize,
    pub vocab_cap: usize,
    pub stlr: StlrShape,
    pub disc: DiscriminativeLrPolicy,
    pub schedule: UnfreezeSchedule,
    pub seed: u64,
}

impl TrainConfig {
    pub fn toy(seed: u64) -> Self {
        TrainConfig {
            hidden: 64,
            batch_size: 32,
            vocab_cap: 20_000,
            stlr: StlrShape::default(),
            disc: DiscriminativeLrPolicy { base_lr: 1.0, decay_factor: 2.6 },
            schedule: emit_unfreeze_schedule(ModelKind::Toy),
            seed,
        }
    }
}

/// Loss per epoch, one record per (cycle, epoch).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub cycle: u32,
    pub epoch: u32,
    pub train_loss: f64,
}

/// The training trace: per-epoch losses, the full learning-rate trace, and
/// the validation loss at the end of each cycle.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainLog {
    pub epochs: Vec<EpochRecord>,
    pub lr_trace: Vec<f64>,
    pub valid_loss: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainOutcome {
    pub model: BowModel,
    pub log: TrainLog,
}

fn label_targets(doc: &Document, label_index: &BTreeMap<&ConceptId, u32>) -> Vec<u32> {
    let mut target: Vec<u32> = doc
        .labels
        .iter()
        .filter_map(|l| label_index.get(l).copied())
        .collect();
    target.sort_unstable();
    target
}

/// Trains the bag-of-words model over the unfreezing schedule.
///
/// Within each cycle only the unfrozen trailing groups update; each group's
/// step size is the cycle's slanted triangular rate scaled by the
/// discriminative policy. The label space is fixed to the labels seen in
/// training. Deterministic for a fixed config.
pub fn train(
    train_corpus: &Corpus,
    valid_corpus: &Corpus,
    cfg: &TrainConfig,
) -> Result<TrainOutcome, TrainerError> {
    if train_corpus.is_empty() {
        return Err(TrainerError::EmptyCorpus);
    }
    if cfg.hidden == 0 {
        return Err(TrainerError::InvalidConfig("hidden width must be at least 1"));
    }
    if cfg.batch_size == 0 {
        return Err(TrainerError::InvalidConfig("batch_size must be at least 1"));
    }
    for cycle in &cfg.schedule.cycles {
        if let UnfrozenGroups::Count(n) = cycle.unfrozen {
            if n == 0 || n > N_GROUPS {
                return Err(TrainerError::InvalidSchedule(
                    "unfrozen count must be between 1 and the model's group count",
                ));
            }
        }
    }

    let vocab = build_vocab(train_corpus, cfg.vocab_cap)?;
    let labels: Vec<ConceptId> = {
        let set: BTreeSet<&ConceptId> =
            train_corpus.docs().iter().flat_map(|d| d.labels.iter()).collect();
        set.into_iter().cloned().collect()
    };
    let label_index: BTreeMap<&ConceptId, u32> =
        labels.iter().enumerate().map(|(i, l)| (l, i as u32)).collect();

    let features: Vec<SparseVector> =
        train_corpus.docs().iter().map(|d| featurize(&vocab, d)).collect();
    let targets: Vec<Vec<u32>> =
        train_corpus.docs().iter().map(|d| label_targets(d, &label_index)).collect();
    let valid_features: Vec<SparseVector> =
        valid_corpus.docs().iter().map(|d| featurize(&vocab, d)).collect();
    let valid_targets: Vec<Vec<u32>> =
        valid_corpus.docs().iter().map(|d| label_targets(d, &label_index)).collect();

    let base_rng = SplitRng::new(cfg.seed);
    let mut init_rng = base_rng.split("init");
    let mut shuffle_rng = base_rng.split("shuffle");
    let mut model = BowModel::init(vocab, labels, cfg.hidden, &mut init_rng);

    let n = features.len();
    let n_batches = n.div_ceil(cfg.batch_size);
    let mut log = TrainLog::default();

    for cycle in &cfg.schedule.cycles {
        let unfrozen_from = match cycle.unfrozen {
            UnfrozenGroups::All => 0,
            UnfrozenGroups::Count(k) => (N_GROUPS - k) as usize,
        };
        let total_steps = cycle.n_iters * n_batches as u32;
        let stlr = StlrConfig::new(cycle.max_lr, cfg.stlr.cut_frac, cfg.stlr.ratio, total_steps)?;
        let mut step: u32 = 0;

        for epoch in 0..cycle.n_iters {
            let mut order: Vec<usize> = (0..n).collect();
            shuffle_rng.shuffle(&mut order);
            let mut epoch_loss = 0.0;

            for batch in order.chunks(cfg.batch_size) {
                let xs: Vec<&SparseVector> = batch.iter().map(|&i| &features[i]).collect();
                let ys: Vec<&[u32]> = batch.iter().map(|&i| targets[i].as_slice()).collect();
                let lr = stlr_lr(step, &stlr)?;
                let (loss, grads) = batch_loss_and_grads(&model, &xs, &ys);
                if !loss.is_finite() {
                    return Err(TrainerError::Diverged {
                        cycle: cycle.cycle_no,
                        epoch,
                        loss,
                    });
                }
                epoch_loss += loss * batch.len() as f64;

                // Group 1 is depth 1 from the last group, group 2 is depth 0.
                if unfrozen_from == 0 {
                    let lr1 = lr * cfg.disc.scale(N_GROUPS - 1);
                    for (w, g) in model.w1.iter_mut().zip(&grads.w1) {
                        *w -= lr1 * g;
                    }
                    for (b, g) in model.b1.iter_mut().zip(&grads.b1) {
                        *b -= lr1 * g;
                    }
                }
                if unfrozen_from <= 1 {
                    let lr2 = lr * cfg.disc.scale(0);
                    for (w, g) in model.w2.iter_mut().zip(&grads.w2) {
                        *w -= lr2 * g;
                    }
                    for (b, g) in model.b2.iter_mut().zip(&grads.b2) {
                        *b -= lr2 * g;
                    }
                }
                log.lr_trace.push(lr);
                step += 1;
            }
            log.epochs.push(EpochRecord {
                cycle: cycle.cycle_no,
                epoch,
                train_loss: epoch_loss / n as f64,
            });
        }

        if !valid_features.is_empty() {
            let xs: Vec<&SparseVector> = valid_features.iter().collect();
            let ys: Vec<&[u32]> = valid_targets.iter().map(Vec::as_slice).collect();
            log.valid_loss.push(batch_loss(&model, &xs, &ys));
        }
        if !model.all_finite() {
            return Err(TrainerError::Diverged {
                cycle: cycle.cycle_no,
                epoch: cycle.n_iters,
                loss: f64::NAN,
            });
        }
    }

    Ok(TrainOutcome { model, log })
}

/// Sigmoid scores for every model label on every document, as a ranked
/// [`ScoreMatrix`].
pub fn predict(model: &BowModel, docs: &[Document]) -> Result<ScoreMatrix, TrainerError> {
    model.check_shapes()?;
    let mut rows: BTreeMap<String, Vec<(ConceptId, f64)>> = BTreeMap::new();
    for doc in docs {
        let x = featurize(&model.vocab, doc);
        let probs = model.forward(&x);
        let row: Vec<(ConceptId, f64)> =
            model.labels.iter().cloned().zip(probs).collect();
        if rows.insert(doc.id.clone(), row).is_some() {
            return Err(TrainerError::DuplicateDocId(doc.id.clone()));
        }
    }
    ScoreMatrix::new(rows).map_err(|_| TrainerError::ShapeMismatch)
}
