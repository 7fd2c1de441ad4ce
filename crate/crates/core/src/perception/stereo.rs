use crate::math;

use super::PerceptionError;

/// Head frame: x right, y up, z forward, metres, origin midway between
/// the eyes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    /// Azimuth (positive right) and elevation (positive up) in degrees.
    pub fn direction_deg(&self) -> (f64, f64) {
        let horiz = math::sqrt(self.x * self.x + self.z * self.z);
        (
            math::to_deg(math::atan2(self.x, self.z)),
            math::to_deg(math::atan2(self.y, horiz)),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Eye {
    Left,
    Right,
}

/// Eye camera layout. Distortion is not modelled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EyeGeometry {
    pub baseline_m: f64,
    /// Focal length in units of half the image width.
    pub focal_length: f64,
    pub left_yaw_deg: f64,
    pub right_yaw_deg: f64,
    pub pitch_deg: f64,
    pub width: u32,
    pub height: u32,
}

impl Default for EyeGeometry {
    fn default() -> Self {
        EyeGeometry {
            baseline_m: 0.06,
            focal_length: 1.0,
            left_yaw_deg: 0.0,
            right_yaw_deg: 0.0,
            pitch_deg: 0.0,
            width: 640,
            height: 480,
        }
    }
}

impl EyeGeometry {
    pub fn validate(&self) -> Result<(), PerceptionError> {
        if !(self.baseline_m.is_finite() && self.baseline_m > 0.0) {
            return Err(PerceptionError::InvalidGeometry("baseline must be positive"));
        }
        if !(self.focal_length.is_finite() && self.focal_length > 0.0) {
            return Err(PerceptionError::InvalidGeometry("focal length must be positive"));
        }
        for yaw in [self.left_yaw_deg, self.right_yaw_deg] {
            if !(-35.0..=35.0).contains(&yaw) {
                return Err(PerceptionError::InvalidGeometry("eye yaw outside ±35°"));
            }
        }
        if !(-14.0..=8.0).contains(&self.pitch_deg) {
            return Err(PerceptionError::InvalidGeometry("eye pitch outside [-14°, 8°]"));
        }
        if self.width == 0 || self.height == 0 {
            return Err(PerceptionError::InvalidGeometry("image size must be non-zero"));
        }
        Ok(())
    }

    fn center(&self, eye: Eye) -> Point3 {
        let half = self.baseline_m / 2.0;
        match eye {
            Eye::Left => Point3::new(-half, 0.0, 0.0),
            Eye::Right => Point3::new(half, 0.0, 0.0),
        }
    }

    fn yaw(&self, eye: Eye) -> f64 {
        match eye {
            Eye::Left => self.left_yaw_deg,
            Eye::Right => self.right_yaw_deg,
        }
    }

    /// Image coordinates to pixels, origin at the top-left corner.
    pub fn to_pixels(&self, p: ImagePoint) -> (f64, f64) {
        let half_w = self.width as f64 / 2.0;
        (half_w + p.x * half_w, self.height as f64 / 2.0 - p.y * half_w)
    }
}

/// Normalized image coordinates (`f·x/z`, `f·y/z`), y up.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImagePoint {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StereoProjection {
    pub left: ImagePoint,
    pub right: ImagePoint,
}

impl StereoProjection {
    /// `left.x - right.x`.
    pub fn disparity(&self) -> f64 {
        self.left.x - self.right.x
    }
}

fn project_eye(point: Point3, geom: &EyeGeometry, eye: Eye) -> Result<ImagePoint, PerceptionError> {
    let c = geom.center(eye);
    let d = Point3::new(point.x - c.x, point.y - c.y, point.z - c.z);
    let (sy, cy) = (math::sin(math::to_rad(geom.yaw(eye))), math::cos(math::to_rad(geom.yaw(eye))));
    let (sp, cp) = (math::sin(math::to_rad(geom.pitch_deg)), math::cos(math::to_rad(geom.pitch_deg)));
    // Camera axes after yaw (toward +x) then pitch (toward +y).
    let forward = Point3::new(sy * cp, sp, cy * cp);
    let right = Point3::new(cy, 0.0, -sy);
    let up = Point3::new(-sy * sp, cp, -cy * sp);
    let dot = |a: Point3| a.x * d.x + a.y * d.y + a.z * d.z;
    let (x, y, z) = (dot(right), dot(up), dot(forward));
    if !(z > 0.0) {
        return Err(PerceptionError::BehindEye(eye));
    }
    Ok(ImagePoint {
        x: geom.focal_length * x / z,
        y: geom.focal_length * y / z,
    })
}

/// Projects a head-frame point into both eye cameras.
pub fn project_stereo(point: Point3, geom: &EyeGeometry) -> Result<StereoProjection, PerceptionError> {
    geom.validate()?;
    if !(point.x.is_finite() && point.y.is_finite() && point.z.is_finite()) {
        return Err(PerceptionError::NonFinite);
    }
    Ok(StereoProjection {
        left: project_eye(point, geom, Eye::Left)?,
        right: project_eye(point, geom, Eye::Right)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_point_disparity() {
        let g = EyeGeometry::default();
        for d in [0.3, 1.0, 2.5, 10.0] {
            let p = project_stereo(Point3::new(0.0, 0.0, d), &g).unwrap();
            assert!((p.disparity() - g.focal_length * g.baseline_m / d).abs() < 1e-12);
            assert!((p.left.x + p.right.x).abs() < 1e-15);
        }
    }

    #[test]
    fn far_point_has_vanishing_disparity() {
        let g = EyeGeometry::default();
        let p = project_stereo(Point3::new(0.0, 0.0, 1e9), &g).unwrap();
        assert!(p.disparity() < 1e-10);
    }

    #[test]
    fn behind_rejected() {
        let g = EyeGeometry::default();
        assert_eq!(
            project_stereo(Point3::new(0.0, 0.0, -1.0), &g),
            Err(PerceptionError::BehindEye(Eye::Left))
        );
        // Just in front of the right eye but beside the left one.
        let mut turned = g;
        turned.left_yaw_deg = -35.0;
        turned.right_yaw_deg = -35.0;
        assert!(project_stereo(Point3::new(1.0, 0.0, 0.5), &turned).is_err());
    }

    #[test]
    fn yawed_eye_recenters_target() {
        let mut g = EyeGeometry::default();
        let target = Point3::new(-g.baseline_m / 2.0 + 1.0, 0.0, 1.0);
        g.left_yaw_deg = 35.0;
        let p = project_stereo(target, &g).unwrap();
        assert!((p.left.x - math::to_rad(10.0).tan()).abs() < 1e-12);
        assert!(project_stereo(target, &EyeGeometry { left_yaw_deg: 40.0, ..g }).is_err());
    }

    #[test]
    fn pitch_moves_image_down() {
        let g = EyeGeometry { pitch_deg: 8.0, ..EyeGeometry::default() };
        let p = project_stereo(Point3::new(0.0, 0.0, 1.0), &g).unwrap();
        assert!(p.left.y < 0.0);
    }

    #[test]
    fn pixels() {
        let g = EyeGeometry::default();
        assert_eq!(g.to_pixels(ImagePoint::default()), (320.0, 240.0));
        assert_eq!(g.to_pixels(ImagePoint { x: 1.0, y: 0.0 }), (640.0, 240.0));
    }

    #[test]
    fn direction() {
        let (az, el) = Point3::new(1.0, 0.0, 1.0).direction_deg();
        assert!((az - 45.0).abs() < 1e-12 && el.abs() < 1e-12);
    }
}
