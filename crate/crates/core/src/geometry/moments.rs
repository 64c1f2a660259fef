use crate::imgio::BinaryImage;
use crate::{Error, Result};

/// Raw moments up to second order, centroid, normalized central moments and
/// orientation of a binary shape.
///
/// Raw moments are accumulated in integer arithmetic, so they are exact. The
/// central moments are derived from the translation-invariant integer
/// quantities `m00 * m20 - m10^2` (and friends), which keeps them and
/// `theta` bit-identical under integer translations.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSet {
    pub m00: f64,
    pub m10: f64,
    pub m01: f64,
    pub m11: f64,
    pub m20: f64,
    pub m02: f64,
    pub cx: f64,
    pub cy: f64,
    pub mu20p: f64,
    pub mu11p: f64,
    pub mu02p: f64,
    /// Orientation of the major axis in radians, in `(-pi/2, pi/2]`, measured
    /// from the +x axis towards +y (image rows grow downward).
    pub theta: f64,
    raw: RawMoments,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct RawMoments {
    m00: i64,
    m10: i64,
    m01: i64,
    m11: i64,
    m20: i64,
    m02: i64,
}

impl MomentSet {
    /// Integer pixel count.
    pub fn area(&self) -> u64 {
        self.raw.m00 as u64
    }

    /// Offset of pixel `(x, y)` from the centroid as an exact integer pair
    /// scaled by `m00`: `(x * m00 - m10, y * m00 - m01)`.
    #[inline]
    pub fn scaled_offset(&self, x: i64, y: i64) -> (i64, i64) {
        (x * self.raw.m00 - self.raw.m10, y * self.raw.m00 - self.raw.m01)
    }

    /// Offset of pixel `(x, y)` from the centroid. Computed from
    /// [`scaled_offset`](Self::scaled_offset) with a single rounding, so it
    /// is bit-identical for a shape and any integer translation of it.
    #[inline]
    pub fn offset(&self, x: i64, y: i64) -> (f64, f64) {
        let (nx, ny) = self.scaled_offset(x, y);
        let m = self.m00;
        (nx as f64 / m, ny as f64 / m)
    }

    /// True when second-order moments carry no direction: `mu20 = mu02` and
    /// `mu11 = 0`, tested exactly.
    pub fn is_isotropic(&self) -> bool {
        let (c20, c11, c02) = self.scaled_central();
        c20 == c02 && c11 == 0
    }

    /// Central moments scaled by `m00^2`, exact integers.
    fn scaled_central(&self) -> (i128, i128, i128) {
        let r = self.raw;
        let (m00, m10, m01) = (r.m00 as i128, r.m10 as i128, r.m01 as i128);
        (
            m00 * r.m20 as i128 - m10 * m10,
            m00 * r.m11 as i128 - m10 * m01,
            m00 * r.m02 as i128 - m01 * m01,
        )
    }
}

/// Moments of the foreground pixels (value 1) of `img`.
pub fn compute_moments(img: &BinaryImage) -> Result<MomentSet> {
    let mut r = RawMoments {
        m00: 0,
        m10: 0,
        m01: 0,
        m11: 0,
        m20: 0,
        m02: 0,
    };
    for (x, y) in img.foreground() {
        let (x, y) = (x as i64, y as i64);
        r.m00 += 1;
        r.m10 += x;
        r.m01 += y;
        r.m11 += x * y;
        r.m20 += x * x;
        r.m02 += y * y;
    }
    if r.m00 == 0 {
        return Err(Error::EmptyShape);
    }
    let m00 = r.m00 as f64;
    let mut set = MomentSet {
        m00,
        m10: r.m10 as f64,
        m01: r.m01 as f64,
        m11: r.m11 as f64,
        m20: r.m20 as f64,
        m02: r.m02 as f64,
        cx: r.m10 as f64 / m00,
        cy: r.m01 as f64 / m00,
        mu20p: 0.0,
        mu11p: 0.0,
        mu02p: 0.0,
        theta: 0.0,
        raw: r,
    };
    let (c20, c11, c02) = set.scaled_central();
    let norm = m00 * m00;
    set.mu20p = c20 as f64 / norm;
    set.mu11p = c11 as f64 / norm;
    set.mu02p = c02 as f64 / norm;
    // Same quadrant as atan2(2 mu11', mu20' - mu02'); the common positive
    // factor m00^2 does not change the angle.
    set.theta = 0.5 * (2.0 * c11 as f64).atan2((c20 - c02) as f64);
    if set.theta <= -std::f64::consts::FRAC_PI_2 {
        set.theta += std::f64::consts::PI;
    }
    Ok(set)
}
