//! Sensory front-end models: level-only binaural hearing and stereo
//! pinhole vision.

use core::fmt;

mod ear;
mod render;
mod stereo;

pub use ear::{ear_gains, EarModel, EarPair, SoundSource};
pub use render::{
    audio_sweep, position_azimuth, render_stereo, StereoFrame, StereoStream, SweepRow, Waveform,
    SWEEP_POSITIONS,
};
pub use stereo::{project_stereo, Eye, EyeGeometry, ImagePoint, Point3, StereoProjection};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerceptionError {
    /// Source distance must be positive and finite.
    Distance(f64),
    InvalidEar(&'static str),
    InvalidGeometry(&'static str),
    /// The waveform has fewer samples than the requested duration.
    WaveformTooShort { needed: usize, available: usize },
    /// A render chunk would hold no samples.
    ChunkTooShort,
    /// The point is not in front of this eye's image plane.
    BehindEye(Eye),
    NonFinite,
}

impl fmt::Display for PerceptionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PerceptionError::Distance(d) => write!(f, "source distance {d} must be positive"),
            PerceptionError::InvalidEar(why) => write!(f, "invalid ear model: {why}"),
            PerceptionError::InvalidGeometry(why) => write!(f, "invalid eye geometry: {why}"),
            PerceptionError::WaveformTooShort { needed, available } => write!(
                f,
                "waveform has {available} samples, {needed} needed"
            ),
            PerceptionError::ChunkTooShort => f.write_str("render chunk shorter than one sample"),
            PerceptionError::BehindEye(eye) => write!(f, "point is behind the {eye:?} eye"),
            PerceptionError::NonFinite => f.write_str("non-finite value"),
        }
    }
}

impl core::error::Error for PerceptionError {}
