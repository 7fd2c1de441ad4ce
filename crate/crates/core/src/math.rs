// Float helpers that work without std.

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn to_rad(deg: f64) -> f64 {
    deg * (core::f64::consts::PI / 180.0)
}

#[inline]
pub(crate) fn to_deg(rad: f64) -> f64 {
    rad * (180.0 / core::f64::consts::PI)
}

/// Wraps an angle in degrees into (-180, 180].
pub(crate) fn wrap_deg(deg: f64) -> f64 {
    let mut a = libm::fmod(deg, 360.0);
    if a <= -180.0 {
        a += 360.0;
    } else if a > 180.0 {
        a -= 360.0;
    }
    a
}
