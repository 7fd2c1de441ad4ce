//! Splits a gaze direction between the eyes and the neck.
//!
//! The eyes are lighter and faster than the head, so they take as much of
//! the rotation as their range allows and the neck covers the rest.

use crate::rig::NeckPose;

pub const EYE_YAW_LIMIT: f64 = 35.0;
pub const EYE_PITCH_MIN: f64 = -14.0;
pub const EYE_PITCH_MAX: f64 = 8.0;
pub const NECK_YAW_LIMIT: f64 = 83.0;
pub const NECK_PITCH_MIN: f64 = -30.0;
pub const NECK_PITCH_MAX: f64 = 40.0;

/// Eye and neck angles for one gaze target, degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GazeAllocation {
    pub eye_left_yaw: f64,
    pub eye_right_yaw: f64,
    pub eye_pitch: f64,
    pub neck: NeckPose,
    /// The target was outside the combined range and was clamped.
    pub clamped: bool,
}

impl GazeAllocation {
    /// Total yaw and pitch of the line of sight.
    pub fn total(&self) -> (f64, f64) {
        (self.eye_left_yaw + self.neck.yaw, self.eye_pitch + self.neck.pitch)
    }
}

fn split(target: f64, eye_min: f64, eye_max: f64, neck_min: f64, neck_max: f64) -> (f64, f64, bool) {
    let reachable = target.clamp(eye_min + neck_min, eye_max + neck_max);
    let eye = reachable.clamp(eye_min, eye_max);
    (eye, reachable - eye, reachable != target)
}

/// Eyes-first allocation of `azimuth` (positive right) and `elevation`
/// (positive up). Neck roll is left at zero.
pub fn gaze_allocate(azimuth_deg: f64, elevation_deg: f64) -> GazeAllocation {
    let (eye_yaw, neck_yaw, c1) = split(
        azimuth_deg,
        -EYE_YAW_LIMIT,
        EYE_YAW_LIMIT,
        -NECK_YAW_LIMIT,
        NECK_YAW_LIMIT,
    );
    let (eye_pitch, neck_pitch, c2) = split(
        elevation_deg,
        EYE_PITCH_MIN,
        EYE_PITCH_MAX,
        NECK_PITCH_MIN,
        NECK_PITCH_MAX,
    );
    GazeAllocation {
        eye_left_yaw: eye_yaw,
        eye_right_yaw: eye_yaw,
        eye_pitch,
        neck: NeckPose {
            yaw: neck_yaw,
            pitch: neck_pitch,
            roll: 0.0,
        },
        clamped: c1 || c2 || !azimuth_deg.is_finite() || !elevation_deg.is_finite(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_angle_eyes_only() {
        let g = gaze_allocate(20.0, 0.0);
        assert_eq!((g.eye_left_yaw, g.eye_right_yaw, g.neck.yaw), (20.0, 20.0, 0.0));
        assert!(!g.clamped);
    }

    #[test]
    fn sixty_degrees_splits() {
        let g = gaze_allocate(60.0, 0.0);
        assert_eq!((g.eye_left_yaw, g.neck.yaw), (35.0, 25.0));
        let g = gaze_allocate(-60.0, 0.0);
        assert_eq!((g.eye_left_yaw, g.neck.yaw), (-35.0, -25.0));
    }

    #[test]
    fn straight_ahead() {
        assert_eq!(gaze_allocate(0.0, 0.0), GazeAllocation::default());
    }

    #[test]
    fn elevation_uses_asymmetric_ranges() {
        let g = gaze_allocate(0.0, 20.0);
        assert_eq!((g.eye_pitch, g.neck.pitch), (8.0, 12.0));
        let g = gaze_allocate(0.0, -20.0);
        assert_eq!((g.eye_pitch, g.neck.pitch), (-14.0, -6.0));
    }

    #[test]
    fn out_of_range_clamped() {
        let g = gaze_allocate(150.0, 0.0);
        assert!(g.clamped);
        assert_eq!(g.total().0, 118.0);
    }
}
