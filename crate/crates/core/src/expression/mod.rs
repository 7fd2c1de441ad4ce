//! Facial expression layer.
//!
//! Action Units compile to head motions through a fixed table, emotion
//! presets are fixed motion sets, and live operator expressions reach the
//! motors through an affine map `w = F_o + A·f` whose parameters can be
//! fitted from calibration samples.

use core::fmt;

mod au;
mod fit;
mod mapping;
mod preset;

pub use au::{resolve_au_conflicts, AuFrame, AuId, AuPriority, AuTable, SUPPORTED_AUS};
pub use fit::{fit_mapping, CalibrationSample, FitReport};
pub use mapping::{map_expression, ChannelRegistry, ExpressionVector, MappingParams};
pub use preset::{emotion_preset, emotion_preset_by_name, Emotion};

#[derive(Debug, Clone, PartialEq)]
pub enum ExpressionError {
    UnsupportedAu(u8),
    MissingAuRow(u8),
    UnknownEmotion,
    UnknownChannel,
    NonFinite,
    /// Vector or matrix dimensions disagree.
    Dimension { expected: usize, found: usize },
    /// Fewer calibration samples than unknowns per motor.
    TooFewSamples { needed: usize, found: usize },
    /// Calibration inputs do not span the channel space; `column` 0 is the
    /// offset, `c + 1` is channel `c`.
    RankDeficient { column: usize },
}

impl fmt::Display for ExpressionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpressionError::UnsupportedAu(id) => write!(f, "action unit {id} is not supported"),
            ExpressionError::MissingAuRow(id) => write!(f, "no motions listed for AU{id}"),
            ExpressionError::UnknownEmotion => f.write_str("unknown emotion"),
            ExpressionError::UnknownChannel => f.write_str("unknown expression channel"),
            ExpressionError::NonFinite => f.write_str("non-finite value"),
            ExpressionError::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            ExpressionError::TooFewSamples { needed, found } => {
                write!(f, "need at least {needed} calibration samples, got {found}")
            }
            ExpressionError::RankDeficient { column } => match column {
                0 => f.write_str("calibration inputs are rank deficient at the offset column"),
                c => write!(
                    f,
                    "calibration inputs are rank deficient: channel {} is a combination of earlier ones",
                    c - 1
                ),
            },
        }
    }
}

impl core::error::Error for ExpressionError {}
