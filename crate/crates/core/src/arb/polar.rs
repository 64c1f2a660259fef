use crate::geometry::{compute_moments, trace_contour, Contour, MomentSet};
use crate::imgio::BinaryImage;
use crate::{Error, Result};

/// A contour point expressed relative to the shape centroid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarSample {
    /// Euclidean distance to the centroid.
    pub r: f64,
    /// Clockwise angle from North in degrees, in `[0, 360)`.
    pub bearing_deg: f64,
}

/// Clockwise bearing from North of a centroid offset given by its integer
/// numerators `(nx, ny)` (x right, y down, common positive denominator).
///
/// Directions on the axes or the diagonals come out as exact multiples of
/// 45 degrees, and a quarter-turn of the offset adds exactly 90 degrees.
pub fn bearing_deg(nx: i64, ny: i64) -> f64 {
    let (east, north) = (nx, -ny);
    if east == 0 && north == 0 {
        return 0.0;
    }
    // Reduce to a quadrant, then measure the angle inside it.
    let (quadrant, along, across) = if east >= 0 && north > 0 {
        (0, north, east)
    } else if east > 0 && north <= 0 {
        (1, east, -north)
    } else if east <= 0 && north < 0 {
        (2, -north, -east)
    } else {
        (3, -east, north)
    };
    let within = if across == 0 {
        0.0
    } else if across == along {
        45.0
    } else {
        (across as f64).atan2(along as f64).to_degrees()
    };
    90.0 * quadrant as f64 + within
}

/// Everything a descriptor needs about one shape: its moments, its outer
/// contour and each contour point in centroid-relative polar form.
#[derive(Clone, Debug)]
pub struct ShapeFrame {
    moments: MomentSet,
    contour: Contour,
    samples: Vec<PolarSample>,
    mass: f64,
    rho: f64,
    furthest: usize,
}

impl ShapeFrame {
    /// Moments are taken over all foreground pixels; the contour is the
    /// outer border of the largest component.
    pub fn from_image(img: &BinaryImage) -> Result<Self> {
        let moments = compute_moments(img)?;
        let contour = trace_contour(img)?;
        let samples = contour
            .points()
            .iter()
            .map(|&(x, y)| {
                let (nx, ny) = moments.scaled_offset(x, y);
                let (dx, dy) = moments.offset(x, y);
                PolarSample {
                    r: (dx * dx + dy * dy).sqrt(),
                    bearing_deg: bearing_deg(nx, ny),
                }
            })
            .collect();
        let mass = moments.m00;
        Ok(Self::assemble(moments, contour, samples, mass))
    }

    /// Same geometry with a different mass normalizer.
    pub fn with_mass(mut self, mass: f64) -> Self {
        self.mass = mass;
        self
    }

    fn assemble(
        moments: MomentSet,
        contour: Contour,
        samples: Vec<PolarSample>,
        mass: f64,
    ) -> Self {
        let mut furthest = 0;
        for (i, s) in samples.iter().enumerate() {
            if s.r > samples[furthest].r {
                furthest = i;
            }
        }
        let rho = samples[furthest].r;
        Self {
            moments,
            contour,
            samples,
            mass,
            rho,
            furthest,
        }
    }

    pub fn moments(&self) -> &MomentSet {
        &self.moments
    }

    pub fn contour(&self) -> &Contour {
        &self.contour
    }

    pub fn samples(&self) -> &[PolarSample] {
        &self.samples
    }

    /// Mass normalizer, the pixel count `m00` unless overridden.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Radius of the circumscribed circle: distance to the farthest contour point.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Index of the farthest contour point (smallest index on ties).
    pub fn furthest_index(&self) -> usize {
        self.furthest
    }

    pub(crate) fn require_extent(&self) -> Result<()> {
        if self.rho > 0.0 {
            Ok(())
        } else {
            Err(Error::DegenerateShape("all contour points coincide with the centroid"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compass_points() {
        assert_eq!(bearing_deg(0, -1), 0.0);
        assert_eq!(bearing_deg(1, -1), 45.0);
        assert_eq!(bearing_deg(1, 0), 90.0);
        assert_eq!(bearing_deg(3, 3), 135.0);
        assert_eq!(bearing_deg(0, 2), 180.0);
        assert_eq!(bearing_deg(-5, 5), 225.0);
        assert_eq!(bearing_deg(-1, 0), 270.0);
        assert_eq!(bearing_deg(-7, -7), 315.0);
        assert_eq!(bearing_deg(0, 0), 0.0);
    }

    #[test]
    fn quarter_turn_adds_ninety() {
        for (nx, ny) in [(3i64, -7i64), (11, -2), (1, -9)] {
            let b = bearing_deg(nx, ny);
            // Clockwise quarter-turn on screen: (x, y) -> (-y, x).
            assert_eq!(bearing_deg(-ny, nx), b + 90.0);
            assert_eq!(bearing_deg(-nx, -ny), b + 180.0);
            assert_eq!(bearing_deg(ny, -nx), b + 270.0);
        }
    }

    #[test]
    fn generic_direction_matches_atan2() {
        let b = bearing_deg(2, -7);
        let direct = 2f64.atan2(7.0).to_degrees();
        assert!((b - direct).abs() < 1e-12);
        let b = bearing_deg(-3, -4);
        let direct = (-3f64).atan2(4.0).to_degrees() + 360.0;
        assert!((b - direct).abs() < 1e-12);
    }
}
