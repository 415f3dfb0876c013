//! File formats, dataset ingestion and pipeline configuration for the lmtc
//! toolkit. The algorithms live in `lmtc-core`; this crate owns everything
//! that touches the filesystem, plus the `lmtc` binary.

pub mod config;
pub mod formats;
pub mod ingest;
