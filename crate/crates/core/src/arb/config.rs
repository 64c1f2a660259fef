use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Value stored in each (ring, angular) bin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightMode {
    /// Number of contour points in the bin divided by the shape's mass.
    CountPoints,
    /// Sum of centroid distances of the bin's contour points divided by mass.
    TotalDistance,
    /// Mean centroid distance of the bin's contour points; empty bins are 0.
    AverageDistance,
}

/// How the 0 degree reference of the angular partition is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrientationMode {
    /// North.
    None,
    /// Major axis of the second-order central moments.
    Moments,
    /// Keep North but replace the histogram with its 2-D DFT magnitude.
    FourierMagnitude,
    /// Direction of the contour point farthest from the centroid.
    FurthestPoint,
}

impl WeightMode {
    pub fn token(self) -> &'static str {
        match self {
            WeightMode::CountPoints => "count",
            WeightMode::TotalDistance => "total",
            WeightMode::AverageDistance => "average",
        }
    }
}

impl OrientationMode {
    pub fn token(self) -> &'static str {
        match self {
            OrientationMode::None => "none",
            OrientationMode::Moments => "moments",
            OrientationMode::FourierMagnitude => "fourier",
            OrientationMode::FurthestPoint => "furthest",
        }
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl fmt::Display for OrientationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(WeightMode::CountPoints),
            "total" => Ok(WeightMode::TotalDistance),
            "average" => Ok(WeightMode::AverageDistance),
            other => Err(Error::InvalidConfig(format!("unknown weight mode {other:?}"))),
        }
    }
}

impl FromStr for OrientationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(OrientationMode::None),
            "moments" => Ok(OrientationMode::Moments),
            "fourier" => Ok(OrientationMode::FourierMagnitude),
            "furthest" => Ok(OrientationMode::FurthestPoint),
            other => Err(Error::InvalidConfig(format!("unknown orientation mode {other:?}"))),
        }
    }
}

/// Parameters of an angular radial bins descriptor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArbConfig {
    /// Concentric rings partitioning `[0, rho]`.
    pub rings: usize,
    /// Degrees per angular bin; must divide 360.
    pub angular_width_deg: u32,
    pub weight_mode: WeightMode,
    /// Tilt between successive instances of the overlapping/accumulative variants.
    pub tilt_delta_deg: f64,
    /// Number of tilted instances, at most `angular_width_deg / tilt_delta_deg`.
    pub instances: usize,
    pub orientation_mode: OrientationMode,
}

impl Default for ArbConfig {
    /// The best-performing configuration: 2 rings, 24 bins of 15 degrees,
    /// total distance weights, 3 degree tilt and 5 instances.
    fn default() -> Self {
        Self {
            rings: 2,
            angular_width_deg: 15,
            weight_mode: WeightMode::TotalDistance,
            tilt_delta_deg: 3.0,
            instances: 5,
            orientation_mode: OrientationMode::None,
        }
    }
}

impl ArbConfig {
    /// A single-instance configuration with the given grid and weights.
    pub fn simple(rings: usize, angular_width_deg: u32, weight_mode: WeightMode) -> Self {
        Self {
            rings,
            angular_width_deg,
            weight_mode,
            tilt_delta_deg: angular_width_deg as f64,
            instances: 1,
            orientation_mode: OrientationMode::None,
        }
    }

    pub fn angular_bins(&self) -> usize {
        360 / self.angular_width_deg as usize
    }

    /// Largest useful instance count; further instances repeat earlier ones.
    pub fn max_instances(&self) -> usize {
        ((self.angular_width_deg as f64 / self.tilt_delta_deg) + 1e-9).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.rings == 0 {
            return Err(Error::InvalidConfig("rings must be >= 1".into()));
        }
        if self.angular_width_deg == 0 || 360 % self.angular_width_deg != 0 {
            return Err(Error::InvalidConfig(format!(
                "angular width {} does not divide 360",
                self.angular_width_deg
            )));
        }
        if !(self.tilt_delta_deg.is_finite() && self.tilt_delta_deg > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tilt delta must be positive, got {}",
                self.tilt_delta_deg
            )));
        }
        if self.instances == 0 {
            return Err(Error::InvalidConfig("instances must be >= 1".into()));
        }
        if self.instances > self.max_instances() {
            return Err(Error::InvalidConfig(format!(
                "{} instances with {} degree tilt exceed the {} degree bin width (max {})",
                self.instances,
                self.tilt_delta_deg,
                self.angular_width_deg,
                self.max_instances()
            )));
        }
        Ok(())
    }
}
