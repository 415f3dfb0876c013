//! Learning-rate schedules and gradual-unfreezing plans.
//!
//! The slanted triangular schedule ramps linearly from `lr_max/ratio` up to
//! `lr_max` over the first `⌈cut_frac·total_steps⌉` steps, then decays
//! linearly back. Unfreezing schedules describe training cycles that open up
//! parameter groups from the last layer group towards the first; the
//! transformer and LSTM plans are emitted verbatim as data so external
//! trainers can consume them.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::math;

use super::TrainerError;

/// Slanted triangular learning-rate configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StlrConfig {
    pub lr_max: f64,
    pub cut_frac: f64,
    pub ratio: f64,
    pub total_steps: u32,
}

impl StlrConfig {
    pub fn new(lr_max: f64, cut_frac: f64, ratio: f64, total_steps: u32) -> Result<Self, TrainerError> {
        if !lr_max.is_finite() || lr_max <= 0.0 {
            return Err(TrainerError::InvalidConfig("lr_max must be positive"));
        }
        if !(cut_frac > 0.0 && cut_frac < 1.0) {
            return Err(TrainerError::InvalidConfig("cut_frac must lie in (0,1)"));
        }
        if !ratio.is_finite() || ratio <= 1.0 {
            return Err(TrainerError::InvalidConfig("ratio must exceed 1"));
        }
        if total_steps == 0 {
            return Err(TrainerError::InvalidConfig("total_steps must be at least 1"));
        }
        Ok(StlrConfig { lr_max, cut_frac, ratio, total_steps })
    }

    /// The warm-up length in steps. `cut_frac·total_steps` is snapped to the
    /// nearest integer when within 1e-9 before taking the ceiling, so exact
    /// products like 0.1·100 do not round up to 11.
    pub fn cut(&self) -> u32 {
        let x = self.cut_frac * self.total_steps as f64;
        let nearest = math::round(x);
        let cut = if math::abs(x - nearest) < 1e-9 { nearest } else { math::ceil(x) };
        (cut as u32).max(1)
    }
}

/// Learning rate at `step` (0-based, `step < total_steps`).
///
/// With `cut = ⌈cut_frac·T⌉`: `p = step/cut` while warming up, then
/// `p = 1 − (step−cut)/(T−cut)`; the rate is `lr_max·(1 + p·(ratio−1))/ratio`.
/// The peak step returns `lr_max` exactly.
pub fn stlr_lr(step: u32, cfg: &StlrConfig) -> Result<f64, TrainerError> {
    if step >= cfg.total_steps {
        return Err(TrainerError::StepOutOfRange { step, total: cfg.total_steps });
    }
    let cut = cfg.cut();
    if step == cut {
        return Ok(cfg.lr_max);
    }
    let p = if step < cut {
        step as f64 / cut as f64
    } else {
        1.0 - (step - cut) as f64 / (cfg.total_steps - cut) as f64
    };
    Ok(cfg.lr_max * (1.0 + p * (cfg.ratio - 1.0)) / cfg.ratio)
}

/// Per-group learning rates decaying from the last group towards the first:
/// `lr(g) = base_lr / decay_factor^(depth from last)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscriminativeLrPolicy {
    pub base_lr: f64,
    pub decay_factor: f64,
}

impl DiscriminativeLrPolicy {
    pub fn new(base_lr: f64, decay_factor: f64) -> Result<Self, TrainerError> {
        if !base_lr.is_finite() || base_lr <= 0.0 {
            return Err(TrainerError::InvalidConfig("base_lr must be positive"));
        }
        if !decay_factor.is_finite() || decay_factor < 1.0 {
            return Err(TrainerError::InvalidConfig("decay_factor must be at least 1"));
        }
        Ok(DiscriminativeLrPolicy { base_lr, decay_factor })
    }

    /// Learning rate for the group `depth_from_last` groups before the last.
    pub fn lr(&self, depth_from_last: u32) -> f64 {
        self.base_lr * self.scale(depth_from_last)
    }

    /// The factor applied to a base rate for that group.
    pub fn scale(&self, depth_from_last: u32) -> f64 {
        1.0 / math::powf(self.decay_factor, depth_from_last as f64)
    }
}

/// Which models a schedule is written for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "BERT_LIKE")]
    BertLike,
    #[serde(rename = "DISTIL_LIKE")]
    DistilLike,
    #[serde(rename = "XLNET_LIKE")]
    XlnetLike,
    #[serde(rename = "AWD_LSTM")]
    AwdLstm,
    #[serde(rename = "TOY")]
    Toy,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::BertLike,
        ModelKind::DistilLike,
        ModelKind::XlnetLike,
        ModelKind::AwdLstm,
        ModelKind::Toy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::BertLike => "BERT_LIKE",
            ModelKind::DistilLike => "DISTIL_LIKE",
            ModelKind::XlnetLike => "XLNET_LIKE",
            ModelKind::AwdLstm => "AWD_LSTM",
            ModelKind::Toy => "TOY",
        }
    }

    pub fn parse(s: &str) -> Result<ModelKind, TrainerError> {
        let up = s.to_ascii_uppercase();
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == up)
            .ok_or_else(|| TrainerError::UnknownKind(String::from(s)))
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How many layer groups a cycle trains, counted from the last group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnfrozenGroups {
    Count(u32),
    All,
}

impl UnfrozenGroups {
    /// Partial order used by the schedule invariant: counts grow towards
    /// `All`, and `All` never shrinks back.
    fn rank(&self) -> u64 {
        match self {
            UnfrozenGroups::Count(n) => *n as u64,
            UnfrozenGroups::All => u64::MAX,
        }
    }
}

impl Serialize for UnfrozenGroups {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            UnfrozenGroups::Count(n) => serializer.serialize_u32(*n),
            UnfrozenGroups::All => serializer.serialize_str("all"),
        }
    }
}

impl<'de> Deserialize<'de> for UnfrozenGroups {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = UnfrozenGroups;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a group count or the string \"all\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<UnfrozenGroups, E> {
                u32::try_from(v)
                    .map(UnfrozenGroups::Count)
                    .map_err(|_| E::custom("group count out of range"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<UnfrozenGroups, E> {
                if v == "all" {
                    Ok(UnfrozenGroups::All)
                } else {
                    Err(E::custom("expected \"all\""))
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// One gradual-unfreezing cycle: its peak learning rate, epoch count, and how
/// many layer groups are trainable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnfreezeCycle {
    pub cycle_no: u32,
    pub max_lr: f64,
    pub n_iters: u32,
    pub unfrozen: UnfrozenGroups,
}

/// A full unfreezing plan. Unfrozen counts never decrease across cycles and
/// every cycle runs at least one epoch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnfreezeSchedule {
    pub model_kind: ModelKind,
    pub cycles: Vec<UnfreezeCycle>,
}

impl UnfreezeSchedule {
    pub fn new(model_kind: ModelKind, cycles: Vec<UnfreezeCycle>) -> Result<Self, TrainerError> {
        for pair in cycles.windows(2) {
            if pair[1].unfrozen.rank() < pair[0].unfrozen.rank() {
                return Err(TrainerError::InvalidSchedule(
                    "unfrozen group counts must be non-decreasing across cycles",
                ));
            }
        }
        for cycle in &cycles {
            if cycle.n_iters == 0 {
                return Err(TrainerError::InvalidSchedule("every cycle needs n_iters >= 1"));
            }
            if !cycle.max_lr.is_finite() || cycle.max_lr <= 0.0 {
                return Err(TrainerError::InvalidSchedule("every cycle needs a positive max_lr"));
            }
        }
        Ok(UnfreezeSchedule { model_kind, cycles })
    }
}

fn cycles(rows: &[(f64, u32, UnfrozenGroups)]) -> Vec<UnfreezeCycle> {
    rows.iter()
        .enumerate()
        .map(|(i, &(max_lr, n_iters, unfrozen))| UnfreezeCycle {
            cycle_no: i as u32 + 1,
            max_lr,
            n_iters,
            unfrozen,
        })
        .collect()
}

/// The published training plan for each model family, as data.
pub fn emit_unfreeze_schedule(kind: ModelKind) -> UnfreezeSchedule {
    use UnfrozenGroups::{All, Count};
    let rows: Vec<UnfreezeCycle> = match kind {
        ModelKind::BertLike => cycles(&[
            (2e-4, 12, Count(4)),
            (5e-5, 12, Count(8)),
            (5e-5, 12, Count(12)),
            (5e-5, 36, Count(12)),
            (5e-5, 36, Count(12)),
        ]),
        ModelKind::DistilLike => cycles(&[
            (2e-4, 12, Count(2)),
            (5e-5, 12, Count(4)),
            (5e-5, 12, Count(6)),
            (5e-5, 36, Count(6)),
            (5e-5, 36, Count(6)),
        ]),
        ModelKind::XlnetLike => cycles(&[
            (2e-4, 12, Count(4)),
            (5e-5, 12, Count(6)),
            (5e-5, 12, Count(8)),
            (5e-5, 36, Count(8)),
            (5e-5, 36, Count(8)),
        ]),
        ModelKind::AwdLstm => cycles(&[
            (2e-1, 2, Count(1)),
            (1e-2, 5, Count(2)),
            (1e-3, 5, Count(3)),
            (5e-3, 20, All),
            (1e-4, 32, All),
            (1e-4, 32, All),
        ]),
        // Desk-scale analogue for the two-group bag-of-words model: train the
        // classifier head first, then everything.
        ModelKind::Toy => cycles(&[(0.5, 4, Count(1)), (0.25, 16, All)]),
    };
    UnfreezeSchedule::new(kind, rows).expect("built-in schedules are valid")
}
