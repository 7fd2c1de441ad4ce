use crate::math;

use super::PerceptionError;

/// A point source on the horizontal plane around the head.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoundSource {
    /// Degrees, 0 straight ahead, positive to the right, in (-180, 180].
    pub azimuth_deg: f64,
    pub distance_m: f64,
}

impl SoundSource {
    pub fn new(azimuth_deg: f64, distance_m: f64) -> Result<Self, PerceptionError> {
        if !azimuth_deg.is_finite() {
            return Err(PerceptionError::NonFinite);
        }
        if !(distance_m.is_finite() && distance_m > 0.0) {
            return Err(PerceptionError::Distance(distance_m));
        }
        Ok(SoundSource {
            azimuth_deg: math::wrap_deg(azimuth_deg),
            distance_m,
        })
    }
}

/// Directional sensitivity of one ear with its auricle.
///
/// `gain = rolloff(d) · (floor + (1 - floor) · ((1 + cos(θ - axis)) / 2)^bias)`
/// with `rolloff(d) = ref / (ref + d)`. The auricle makes the pattern
/// point forward of the ear's lateral axis and the floor keeps sound from
/// behind audible but faint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarModel {
    /// Direction of peak sensitivity relative to the nose, degrees.
    pub axis_deg: f64,
    /// Exponent sharpening the cardioid; 1.0 is a plain cardioid.
    pub forward_bias: f64,
    /// Minimum directional gain, reached directly opposite the axis.
    pub rear_floor: f64,
    /// Distance at which the rolloff equals one half, metres.
    pub reference_distance: f64,
}

impl EarModel {
    pub fn validate(&self) -> Result<(), PerceptionError> {
        if !self.axis_deg.is_finite() {
            return Err(PerceptionError::InvalidEar("axis must be finite"));
        }
        if !(self.forward_bias.is_finite() && self.forward_bias > 0.0) {
            return Err(PerceptionError::InvalidEar("forward bias must be positive"));
        }
        if !(self.rear_floor > 0.0 && self.rear_floor <= 1.0) {
            return Err(PerceptionError::InvalidEar("rear floor must be in (0, 1]"));
        }
        if !(self.reference_distance.is_finite() && self.reference_distance > 0.0) {
            return Err(PerceptionError::InvalidEar("reference distance must be positive"));
        }
        Ok(())
    }

    /// Direction-only part of the gain, in `[rear_floor, 1]`.
    pub fn directional(&self, relative_azimuth_deg: f64) -> f64 {
        let c = math::cos(math::to_rad(relative_azimuth_deg - self.axis_deg));
        let lobe = math::powf(((1.0 + c) / 2.0).clamp(0.0, 1.0), self.forward_bias);
        self.rear_floor + (1.0 - self.rear_floor) * lobe
    }

    pub fn rolloff(&self, distance_m: f64) -> f64 {
        self.reference_distance / (self.reference_distance + distance_m)
    }

    pub fn gain(&self, relative_azimuth_deg: f64, distance_m: f64) -> f64 {
        self.rolloff(distance_m) * self.directional(relative_azimuth_deg)
    }

    /// Same ear reflected across the median plane.
    pub fn mirrored(&self) -> Self {
        EarModel {
            axis_deg: -self.axis_deg,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarPair {
    pub left: EarModel,
    pub right: EarModel,
}

impl Default for EarPair {
    /// Ears on the lateral axis tilted 30° forward, plain cardioid, floor
    /// 0.1, half gain at 1 m.
    fn default() -> Self {
        EarPair::mirrored(EarModel {
            axis_deg: 60.0,
            forward_bias: 1.0,
            rear_floor: 0.1,
            reference_distance: 1.0,
        })
    }
}

impl EarPair {
    /// A pair built from the right ear and its mirror image.
    pub fn mirrored(right: EarModel) -> Self {
        EarPair {
            left: right.mirrored(),
            right,
        }
    }

    pub fn validate(&self) -> Result<(), PerceptionError> {
        self.left.validate()?;
        self.right.validate()
    }
}

/// `(left, right)` gains for `source` when the head is turned by
/// `head_yaw_deg`.
pub fn ear_gains(source: &SoundSource, head_yaw_deg: f64, ears: &EarPair) -> (f64, f64) {
    let rel = math::wrap_deg(source.azimuth_deg - head_yaw_deg);
    (
        ears.left.gain(rel, source.distance_m),
        ears.right.gain(rel, source.distance_m),
    )
}
