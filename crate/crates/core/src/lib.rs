//! Building blocks for large multi-label text classification over EU legal
//! corpora labeled with the EuroVoc thesaurus.
//!
//! The crate covers the non-GPU part of such a pipeline:
//!
//! * [`taxonomy`]: a Turtle-subset parser for EuroVoc SKOS dumps, hierarchy
//!   queries, and label-set reduction (descriptors → top terms /
//!   microthesauri / domains);
//! * [`corpus`]: the canonical labeled-document model plus token/label
//!   statistics and label-frequency bands;
//! * [`split`]: deterministic iterative stratification and a random-split
//!   baseline, with stratification-quality diagnostics;
//! * [`metrics`]: Micro-F1 with validation-threshold grid search, RP@K and
//!   nDCG@K over ranked score matrices;
//! * [`trainer`]: a two-layer bag-of-words classifier with manual gradients
//!   that exercises slanted triangular learning rates, discriminative
//!   per-group learning rates and gradual unfreezing, and emits unfreezing
//!   schedules as data.
//!
//! The crate is `no_std` (with `alloc`). Everything here is pure computation;
//! file formats, dataset ingestion and the command-line interface live in the
//! companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod metrics;
pub mod rng;
pub mod split;
pub mod synth;
pub mod taxonomy;
pub mod trainer;

mod math;
