//! Single-file model checkpoints.
//!
//! Layout: an 8-byte magic string, a little-endian u32 format version, a
//! little-endian u64 header length, a JSON header (vocabulary, label space,
//! shapes, and the training config used), then the parameters as
//! little-endian f64 in the fixed order `w1, b1, w2, b2`.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use lmtc_core::taxonomy::ConceptId;
use lmtc_core::trainer::{BowModel, TrainConfig, Vocabulary};

use super::FormatError;

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"LMTCBOW\0";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    tokens: Vec<String>,
    doc_freq: Vec<u32>,
    vocab_docs: u32,
    labels: Vec<ConceptId>,
    hidden: usize,
    config: TrainConfig,
}

pub fn save_model(model: &BowModel, config: &TrainConfig, path: &Path) -> Result<(), FormatError> {
    model
        .check_shapes()
        .map_err(|e| FormatError::file(path, e.to_string()))?;
    let header = Header {
        tokens: model.vocab.tokens().to_vec(),
        doc_freq: model.vocab.doc_freqs().to_vec(),
        vocab_docs: model.vocab.n_docs(),
        labels: model.labels.clone(),
        hidden: model.hidden,
        config: config.clone(),
    };
    let header_json =
        serde_json::to_vec(&header).map_err(|e| FormatError::file(path, e.to_string()))?;

    let file = fs::File::create(path).map_err(|e| FormatError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io = |e| FormatError::io(path, e);
    out.write_all(CHECKPOINT_MAGIC).map_err(io)?;
    out.write_all(&CHECKPOINT_VERSION.to_le_bytes()).map_err(io)?;
    out.write_all(&(header_json.len() as u64).to_le_bytes()).map_err(io)?;
    out.write_all(&header_json).map_err(io)?;
    for params in [&model.w1, &model.b1, &model.w2, &model.b2] {
        for v in params.iter() {
            out.write_all(&v.to_le_bytes()).map_err(io)?;
        }
    }
    out.flush().map_err(io)
}

pub fn load_model(path: &Path) -> Result<(BowModel, TrainConfig), FormatError> {
    let file = fs::File::open(path).map_err(|e| FormatError::io(path, e))?;
    let mut input = std::io::BufReader::new(file);
    let io = |e| FormatError::io(path, e);

    let mut magic = [0u8; 8];
    input.read_exact(&mut magic).map_err(io)?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(FormatError::file(path, "not a model checkpoint (bad magic)"));
    }
    let mut word = [0u8; 4];
    input.read_exact(&mut word).map_err(io)?;
    let version = u32::from_le_bytes(word);
    if version != CHECKPOINT_VERSION {
        return Err(FormatError::file(path, format!("unsupported checkpoint version {version}")));
    }
    let mut long = [0u8; 8];
    input.read_exact(&mut long).map_err(io)?;
    let header_len = u64::from_le_bytes(long) as usize;
    let mut header_json = vec![0u8; header_len];
    input.read_exact(&mut header_json).map_err(io)?;
    let header: Header = serde_json::from_slice(&header_json)
        .map_err(|e| FormatError::file(path, format!("checkpoint header: {e}")))?;

    let vocab = Vocabulary::from_parts(header.tokens, header.doc_freq, header.vocab_docs)
        .map_err(|e| FormatError::file(path, e.to_string()))?;
    let n_features = vocab.len();
    let n_labels = header.labels.len();
    let hidden = header.hidden;
    let mut read_params = |len: usize| -> Result<Vec<f64>, FormatError> {
        let mut out = Vec::with_capacity(len);
        let mut buf = [0u8; 8];
        for _ in 0..len {
            input.read_exact(&mut buf).map_err(|e| FormatError::io(path, e))?;
            out.push(f64::from_le_bytes(buf));
        }
        Ok(out)
    };
    let w1 = read_params(n_features * hidden)?;
    let b1 = read_params(hidden)?;
    let w2 = read_params(hidden * n_labels)?;
    let b2 = read_params(n_labels)?;
    let mut trailer = [0u8; 1];
    if input.read(&mut trailer).map_err(io)? != 0 {
        return Err(FormatError::file(path, "trailing bytes after parameters"));
    }

    let model = BowModel { vocab, labels: header.labels, hidden, w1, b1, w2, b2 };
    model
        .check_shapes()
        .map_err(|e| FormatError::file(path, e.to_string()))?;
    Ok((model, header.config))
}
