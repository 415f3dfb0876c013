//! The optional pipeline configuration file: one JSON document whose values
//! serve as defaults for the corresponding command-line flags. Flags always
//! win. Referenced paths must exist when the config is loaded.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use lmtc_core::taxonomy::LabelLevel;
use lmtc_core::trainer::ModelKind;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Invalid { path: PathBuf, msg: String },
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub jrc_dir: Option<PathBuf>,
    pub eurlex_dir: Option<PathBuf>,
    pub thesaurus: Option<PathBuf>,
    pub label_level: Option<String>,
    pub ratios: Option<[f64; 3]>,
    pub seed: Option<u64>,
    pub vocab_cap: Option<usize>,
    pub trainer: Option<TrainerSection>,
    pub ks: Option<Vec<usize>>,
    pub grid: Option<GridSection>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainerSection {
    pub hidden: Option<usize>,
    pub batch_size: Option<usize>,
    pub cut_frac: Option<f64>,
    pub lr_ratio: Option<f64>,
    pub decay_factor: Option<f64>,
    pub schedule_kind: Option<String>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.to_path_buf(), source: e })?;
        let config: PipelineConfig = serde_json::from_str(&text)
            .map_err(|e| ConfigError::Invalid { path: path.to_path_buf(), msg: e.to_string() })?;
        config.validate(path)?;
        Ok(config)
    }

    fn validate(&self, path: &Path) -> Result<(), ConfigError> {
        let invalid = |msg: String| ConfigError::Invalid { path: path.to_path_buf(), msg };
        for (field, p) in [
            ("jrc_dir", &self.jrc_dir),
            ("eurlex_dir", &self.eurlex_dir),
            ("thesaurus", &self.thesaurus),
        ] {
            if let Some(p) = p {
                if !p.exists() {
                    return Err(invalid(format!("{field}: path `{}` does not exist", p.display())));
                }
            }
        }
        if let Some(level) = &self.label_level {
            if LabelLevel::parse(level).is_none() {
                return Err(invalid(format!("label_level: unknown level `{level}`")));
            }
        }
        if let Some([train, valid, test]) = self.ratios {
            lmtc_core::split::SplitRatios::new(train, valid, test)
                .map_err(|e| invalid(format!("ratios: {e}")))?;
        }
        if let Some(ks) = &self.ks {
            if ks.is_empty() {
                return Err(invalid("ks: must not be empty".to_string()));
            }
            if ks.contains(&0) {
                return Err(invalid("ks: every K must be at least 1".to_string()));
            }
            if ks.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid("ks: must be sorted ascending and unique".to_string()));
            }
        }
        if let Some(grid) = self.grid {
            lmtc_core::metrics::ThresholdGrid::new(grid.start, grid.stop, grid.step)
                .map_err(|e| invalid(format!("grid: {e}")))?;
        }
        if let Some(section) = &self.trainer {
            if let Some(kind) = &section.schedule_kind {
                ModelKind::parse(kind)
                    .map_err(|e| invalid(format!("trainer.schedule_kind: {e}")))?;
            }
        }
        Ok(())
    }
}
